"""Acceptance criteria, one test each.

Every test prints a line ``CRITERION n: PASS|FAIL  detail``; the lines are
repeated in the pytest terminal summary.  Run ``python tests/test_acceptance.py`` to
print the lines without pytest.
"""
import math
import time

import numpy as np

from su11ep.classical import (
    Frame, PhasePoint, gauge_equivalence, integrate, lagrangian_gauge_residual,
)
from su11ep.exact_eigenfunctions import Half, inner_product, ladder_action_check
from su11ep.fock_ops import (
    build_hamiltonian, build_similarity, build_similarity_inverse, build_su11, commutator,
    conjugate, exact_ladder_commutator,
)
from su11ep.grid_resonance import GridSpec, complex_scaled_spectrum, hermiticity_report
from su11ep.model import ModelParams, effective_frequency, eta_from_g, potential_profile
from su11ep.spectra import (
    Branch, ep_degeneracy_check, spectrum_sweep, verify_eigenvalue_law,
)

RESULTS = {}


def record(n, ok, detail):
    RESULTS[n] = f"CRITERION {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(RESULTS[n])
    assert ok, RESULTS[n]


def _law_error(g, n_trunc, levels=3):
    return max(r.relative for r in verify_eigenvalue_law(ModelParams(1.0, g, n_trunc), levels))


def test_criterion_01_eigenvalue_law():
    t0 = time.perf_counter()
    worst = max(_law_error(g, 128) for g in (0.0, 0.3, 0.6))
    seconds = time.perf_counter() - t0
    # N = 64 and 128 both sit on the roundoff floor; the convergence rate is
    # shown where truncation error still dominates
    at64 = max(_law_error(g, 64) for g in (0.0, 0.3, 0.6))
    small = [_law_error(0.6, n, 1) for n in (8, 16, 32)]
    halves = small[0] >= 2 * small[1] and small[1] >= 2 * small[2]
    ok = worst < 1e-6 and seconds < 10 and halves and at64 < 1e-6
    record(1, ok, f"max rel err {worst:.2e} (N=128), {at64:.2e} (N=64), "
                  f"G=0.6 N=8/16/32 {small[0]:.1e}/{small[1]:.1e}/{small[2]:.1e}, {seconds:.2f}s")


def test_criterion_02_real_branch():
    r = verify_eigenvalue_law(ModelParams(1.0, 1.3, 128), 1)[0]
    target = math.sqrt(0.69) / 2
    rel = abs(r.value - target) / target
    ok = abs(r.value.imag) < 1e-8 and rel < 1e-6
    record(2, ok, f"eps0 = {r.value.real:.12f}, |Im| {abs(r.value.imag):.1e}, rel err {rel:.1e}")


def test_criterion_03_ep_location():
    grid = np.round(np.arange(0.90, 1.10 + 5e-3, 0.01), 10)
    sweep = spectrum_sweep(1.0, grid, 128, 3)
    labels = [b for b in sweep.branches() if b is not Branch.DEGENERATE_ZERO]
    flips = sum(a is not b for a, b in zip(labels, labels[1:]))
    ok = (sweep.ep_estimate is not None and abs(sweep.ep_estimate - 1.0) <= 0.01 + 1e-12
          and flips == 1 and labels[0] is Branch.IMAGINARY_PAIR and labels[-1] is Branch.REAL)
    record(3, ok, f"ep_estimate {sweep.ep_estimate}, flips {flips}")


def test_criterion_04_ep_identity():
    rep = ep_degeneracy_check(1.0, 64)
    ok = rep.identity_residual < 1e-12 and rep.normal_form_max_abs_eigenvalue == 0.0
    record(4, ok, f"interior residual {rep.identity_residual:.1e}, "
                  f"normal-form max |eps| {rep.normal_form_max_abs_eigenvalue}")


def test_criterion_05_exact_biorthonormality():
    t0 = time.perf_counter()
    bad = [(m, n) for m in range(13) for n in range(13)
           if inner_product(m, n) != (1 if m == n else 0)]
    ladders = all(ladder_action_check(n, h).ok for n in range(13) for h in Half)
    seconds = time.perf_counter() - t0
    ok = not bad and ladders and seconds < 60
    record(5, ok, f"{169 - len(bad)}/169 exact, ladders {ladders}, {seconds:.2f}s")


def test_criterion_06_commutators():
    n = 64
    c = exact_ladder_commutator(n)
    exact = bool(np.all(c[: n - 1, : n - 1] == np.eye(n - 1, dtype=int)))
    sz, sp, sm = build_su11(n)
    res = max(np.abs((commutator(sz, sp) - sp).interior(4)).max(),
              np.abs((commutator(sz, sm) + sm).interior(4)).max(),
              np.abs((commutator(sp, sm) + 2 * sz).interior(4)).max())
    record(6, exact and res < 1e-12, f"exact [b-,b+] = 1: {exact}, SU(1,1) residual {res:.1e}")


def _similarity_residual(n_trunc):
    p = ModelParams(1.0, 0.3, n_trunc)
    gi = effective_frequency(p).value
    sz, _, _ = build_su11(n_trunc)
    d = conjugate(build_similarity(p), build_hamiltonian(p), build_similarity_inverse(p))
    return float(np.linalg.norm((d - 2j * gi * sz).entries[:8, :8]))


def test_criterion_07_similarity():
    r64, r128 = _similarity_residual(64), _similarity_residual(128)
    record(7, r128 < 1e-6 and r64 < 1e-6, f"n<8 block residual {r128:.1e} (N=128), {r64:.1e} (N=64)")


def test_criterion_08_resonances():
    spec = GridSpec(-12.0, 12.0, 801, -math.pi / 4)
    ket = complex_scaled_spectrum(1.0, spec, 5)
    bra = complex_scaled_spectrum(1.0, spec.with_(theta=math.pi / 4), 5)
    fine = complex_scaled_spectrum(1.0, spec.with_(points=1601), 5)
    worst = max(ket.deviations)
    mirror = max(abs(a - np.conj(b)) for a, b in zip(ket.eigenvalues, bra.eigenvalues))
    targets_ok = all(abs(t - 1j * (n + 0.5)) == 0 for n, t in enumerate(ket.targets))
    ratio = min(a / b for a, b in zip(ket.deviations, fine.deviations))
    ok = worst < 1e-3 and mirror < 1e-9 and ratio >= 2 and targets_ok
    record(8, ok, f"max dev {worst:.1e} ({spec.stencil}), conjugate defect {mirror:.1e}, "
                  f"refinement ratio >= {ratio:.1f}")


def test_criterion_09_hermiticity():
    spec = GridSpec()
    r3 = hermiticity_report(ModelParams(1.0, 0.3), spec)
    r6 = hermiticity_report(ModelParams(1.0, 0.6), spec)
    rel = max(r3.h0_defect / r3.h0_norm, r3.sz_defect / r3.sz_norm,
              r3.sp_defect / r3.sp_norm, r3.sm_defect / r3.sm_norm)
    lin = abs(r6.hg_defect / r3.hg_defect - 2.0) / 2.0
    ok = rel < 1e-10 and r3.hg_defect > 0 and lin < 0.01
    record(9, ok, f"max relative defect {rel:.1e}, H(G) defect {r3.hg_defect:.3e} -> "
                  f"{r6.hg_defect:.3e}, linearity error {lin:.1e}")


def test_criterion_10_gauge_identity():
    p = ModelParams(1.0, 0.6)
    eta = eta_from_g(p)
    rng = np.random.default_rng(20240611)
    z = rng.uniform(-1, 1, (1000, 4))
    pts = [(a + 1j * b, c + 1j * d) for a, b, c, d in z]
    worst = max(gauge_equivalence(X, P, p, eta=eta).residual for X, P in pts)
    guard = max(gauge_equivalence(X, P, p, eta=eta + 1e-3).residual for X, P in pts)
    ok = abs(eta - math.log(2)) < 1e-15 and worst < 1e-12 and guard > 1e-4
    record(10, ok, f"max residual {worst:.1e} over 1000 points, perturbed eta {guard:.1e}")


def test_criterion_11_orbit():
    tr = integrate(PhasePoint(0.0, 1.0), 1e-3, 3000, ModelParams(1.0, 0.0))
    rel = abs(tr.q[-1] - math.sinh(3.0)) / math.sinh(3.0)
    record(11, rel < 1e-8 and tr.energy_drift < 1e-10,
           f"x(3) rel err {rel:.1e}, energy drift {tr.energy_drift:.1e}")


def test_criterion_12_lagrangian():
    p = ModelParams(1.0, 0.6)
    res = {}
    for dt in (2e-3, 1e-3):
        tr = integrate(PhasePoint(1.0, 0.0, 0.0, Frame.TRANSFORMED), dt, int(round(2.0 / dt)), p)
        res[dt] = lagrangian_gauge_residual(tr, p)
    order = math.log2(res[2e-3] / res[1e-3])
    record(12, res[1e-3] < 1e-6 and 1.8 < order < 2.2,
           f"residual {res[1e-3]:.2e} at dt=1e-3, observed order {order:.2f}")


def test_criterion_13_figures():
    gs = (0.3, 0.7, 1.0, 1.3, 1.7)
    signs = []
    for g in gs:
        (_, vm), (_, v0), (_, vp) = potential_profile(ModelParams(1.0, g), [-1.0, 0.0, 1.0])
        signs.append(int(np.sign(vp)) if vm == vp else None)
    fig1 = signs == [-1, -1, 0, 1, 1]
    sweep = spectrum_sweep(1.0, [0.0, 0.5, 1.0, 1.5, 2.0], 128, 3)
    fig2 = sweep.branches() == [Branch.IMAGINARY_PAIR] * 2 + [Branch.DEGENERATE_ZERO] + [Branch.REAL] * 2
    zero = all(v == 0 for _, v in sweep.points[2].levels)
    pairs = all(len(p.levels) == 6 for p in sweep.points[:2])
    record(13, fig1 and fig2 and zero and pairs,
           f"potential signs {signs}, branches {[b.value for b in sweep.branches()]}")


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                pass
