"""Time the numba and numpy kernel backends side by side.

Each backend runs in its own interpreter because the backend is fixed at
import time by SU11EP_DISABLE_NUMBA.  Usage: python benchmarks/bench_kernels.py
"""
import json
import os
import subprocess
import sys

WORKLOAD = r"""
import json, time
import numpy as np
from su11ep import _kernels, backend
from su11ep.fock_ops import build_hamiltonian
from su11ep.model import ModelParams
from su11ep.spectra import diagonalize

def best(fn, repeat=3):
    fn()  # warm-up, includes JIT compilation
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter(); fn(); times.append(time.perf_counter() - t0)
    return min(times)

h = build_hamiltonian(ModelParams(1.0, 0.3, 128)).entries
a = np.array([[-0.6j, 1.0], [1.0, 0.6j]])
out = {
    "backend": backend(),
    "diagonalize_N128": best(lambda: diagonalize(h)),
    "hessenberg_N256": best(lambda: _kernels.hessenberg(
        build_hamiltonian(ModelParams(1.0, 0.3, 256)).entries + 1e-3)),
    "rk4_300k_steps": best(lambda: _kernels.rk4_linear(a, np.array([1.0, 0.0]), 1e-5, 300000)),
}
print(json.dumps(out))
"""


def run(disable):
    env = dict(os.environ)
    env["SU11EP_DISABLE_NUMBA"] = "1" if disable else "0"
    res = subprocess.run([sys.executable, "-c", WORKLOAD], env=env, capture_output=True,
                         text=True, check=True)
    return json.loads(res.stdout.strip().splitlines()[-1])


def main():
    nb, np_ = run(False), run(True)
    print(f"{'kernel':<20}{'numba [s]':>12}{'numpy [s]':>12}{'speed-up':>10}")
    for key in nb:
        if key == "backend":
            continue
        print(f"{key:<20}{nb[key]:>12.4f}{np_[key]:>12.4f}{np_[key] / nb[key]:>10.1f}")
    print(f"backends: {nb['backend']} vs {np_['backend']}")


if __name__ == "__main__":
    main()
