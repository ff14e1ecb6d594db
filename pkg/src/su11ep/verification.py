"""Invariant suite behind ``su11ep verify``.

Each check returns a :class:`CheckResult`.  Checks whose tolerance depends on
Fock-space convergence are skipped when the requested truncation is below
:data:`MIN_CONVERGED_TRUNCATION`.
"""
import math
import time
from dataclasses import asdict, dataclass, field
from typing import Callable, List

import numpy as np

from . import _accel
from .classical import (
    Frame, PhasePoint, gauge_equivalence, integrate, lagrangian_gauge_residual,
)
from .exact_eigenfunctions import Half, inner_product, ladder_action_check
from .fock_ops import (
    LadderKind, build_hamiltonian, build_ladder, build_similarity, build_similarity_inverse,
    build_su11, commutator, conjugate, exact_ladder_commutator,
)
from .grid_resonance import GridSpec, complex_scaled_spectrum, hermiticity_report
from .model import ModelParams, effective_frequency, eta_from_g, potential_profile
from .spectra import Branch, ep_degeneracy_check, spectrum_sweep, verify_eigenvalue_law

MIN_CONVERGED_TRUNCATION = 64
FIG1_COUPLINGS = (0.3, 0.7, 1.0, 1.3, 1.7)


@dataclass
class CheckResult:
    name: str
    status: str
    residual: float
    tolerance: float
    parameters: dict = field(default_factory=dict)
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0


@dataclass(frozen=True)
class VerifyConfig:
    omega: float = 1.0
    truncation: int = 128
    seed: int = 20240611
    random_points: int = 1000
    eta_perturbation: float = 0.0
    threads: int = 0


def _result(name, residual, tolerance, params, ok=None, **detail):
    if ok is None:
        ok = bool(np.isfinite(residual) and residual < tolerance)
    return CheckResult(name, "pass" if ok else "fail", float(residual), float(tolerance),
                       params, detail)


def _skipped(name, tolerance, params, reason):
    return CheckResult(name, "skipped", float("nan"), float(tolerance), params, {"reason": reason})


def check_eigenvalue_law(cfg):
    params = {"omega": cfg.omega, "g": [0.0, 0.3, 0.6], "truncation": cfg.truncation, "levels": 3}
    if cfg.truncation < MIN_CONVERGED_TRUNCATION:
        return _skipped("eigenvalue_law_below_ep", 1e-6, params, "truncation below convergence gate")
    worst = 0.0
    for g in params["g"]:
        res = verify_eigenvalue_law(ModelParams(cfg.omega, g * cfg.omega, cfg.truncation), 3)
        worst = max(worst, max(r.relative for r in res))
    return _result("eigenvalue_law_below_ep", worst, 1e-6, params)


def check_real_branch(cfg):
    params = {"omega": cfg.omega, "g": 1.3 * cfg.omega, "truncation": cfg.truncation}
    if cfg.truncation < MIN_CONVERGED_TRUNCATION:
        return _skipped("real_branch_above_ep", 1e-6, params, "truncation below convergence gate")
    res = verify_eigenvalue_law(ModelParams(cfg.omega, 1.3 * cfg.omega, cfg.truncation), 1)[0]
    im = abs(res.value.imag)
    return _result("real_branch_above_ep", res.relative, 1e-6, params,
                   ok=res.relative < 1e-6 and im < 1e-8, value=[res.value.real, res.value.imag],
                   abs_imag=im)


def check_ep_location(cfg):
    grid = np.round(np.arange(0.9, 1.1 + 5e-3, 0.01), 10) * cfg.omega
    params = {"omega": cfg.omega, "g_min": 0.9 * cfg.omega, "g_max": 1.1 * cfg.omega,
              "g_step": 0.01 * cfg.omega, "truncation": cfg.truncation}
    if cfg.truncation < MIN_CONVERGED_TRUNCATION:
        return _skipped("ep_location", 0.01, params, "truncation below convergence gate")
    sweep = spectrum_sweep(cfg.omega, grid, cfg.truncation, 3, threads=cfg.threads or None)
    labels = [p.branch for p in sweep.points if p.branch is not Branch.DEGENERATE_ZERO]
    flips = sum(1 for a, b in zip(labels, labels[1:]) if a is not b)
    ordered = labels[0] is Branch.IMAGINARY_PAIR and labels[-1] is Branch.REAL
    est = sweep.ep_estimate
    err = abs(est - cfg.omega) / cfg.omega if est is not None else float("inf")
    return _result("ep_location", err, 0.01 + 1e-12, params, ok=err <= 0.01 + 1e-12 and flips == 1 and ordered,
                   ep_estimate=est, flips=flips,
                   branches=[p.branch.value for p in sweep.points])


def check_ep_identity(cfg):
    params = {"omega": cfg.omega, "truncation": 64}
    rep = ep_degeneracy_check(cfg.omega, 64)
    ok = rep.identity_residual < 1e-12 and rep.normal_form_max_abs_eigenvalue == 0.0
    return _result("ep_identity", rep.identity_residual, 1e-12, params, ok=ok,
                   normal_form_max_abs_eigenvalue=rep.normal_form_max_abs_eigenvalue)


def check_biorthonormality(cfg):
    params = {"max_index": 12}
    bad = [(m, n) for m in range(13) for n in range(13)
           if inner_product(m, n) != (1 if m == n else 0)]
    ladders = all(ladder_action_check(n, h).ok for n in range(13) for h in (Half.KET, Half.BRA))
    return _result("exact_biorthonormality", len(bad), 1, params, ok=not bad and ladders,
                   failures=bad, ladder_checks=ladders)


def check_commutators(cfg):
    n = 64
    params = {"truncation": n}
    c = exact_ladder_commutator(n)
    exact_ok = bool(np.all(c[: n - 1, : n - 1] == np.eye(n - 1, dtype=int)))
    sz, sp, sm = build_su11(n)
    e = 4
    res = max(
        np.abs((commutator(sz, sp) - sp).interior(e)).max(),
        np.abs((commutator(sz, sm) + sm).interior(e)).max(),
        np.abs((commutator(sp, sm) + 2 * sz).interior(e)).max(),
    )
    return _result("ladder_and_su11_commutators", res, 1e-12, params,
                   ok=exact_ok and res < 1e-12, exact_ladder_identity=exact_ok)


def check_similarity(cfg):
    params = {"omega": cfg.omega, "g": 0.3 * cfg.omega, "truncation": cfg.truncation, "block": 8}
    if cfg.truncation < MIN_CONVERGED_TRUNCATION:
        return _skipped("similarity_diagonalization", 1e-6, params, "truncation below convergence gate")
    mp = ModelParams(cfg.omega, 0.3 * cfg.omega, cfg.truncation)
    gi = effective_frequency(mp).value
    sz, _, _ = build_su11(cfg.truncation)
    d = conjugate(build_similarity(mp), build_hamiltonian(mp), build_similarity_inverse(mp))
    res = float(np.linalg.norm((d - 2j * gi * sz).entries[:8, :8]))
    return _result("similarity_diagonalization", res, 1e-6, params)


def check_resonances(cfg):
    spec = GridSpec()
    params = {"omega": cfg.omega, "x_min": spec.x_min, "x_max": spec.x_max,
              "points": spec.points, "stencil": spec.stencil, "levels": 5}
    ket = complex_scaled_spectrum(cfg.omega, spec, 5)
    bra = complex_scaled_spectrum(cfg.omega, spec.with_(theta=-spec.theta), 5)
    fine = complex_scaled_spectrum(cfg.omega, spec.with_(points=1601), 5)
    worst = max(ket.deviations)
    mirror = max(abs(a - np.conj(b)) for a, b in zip(ket.eigenvalues, bra.eigenvalues))
    refine = min(a / b for a, b in zip(ket.deviations, fine.deviations))
    return _result("complex_scaled_resonances", worst, 1e-3, params,
                   ok=worst < 1e-3 and mirror < 1e-9 and refine >= 2.0,
                   deviations=list(ket.deviations), mirror_defect=mirror, refinement_ratio=refine)


def check_hermiticity(cfg):
    spec = GridSpec()
    params = {"omega": cfg.omega, "g": [0.3, 0.6], "points": spec.points}
    reps = [hermiticity_report(ModelParams(cfg.omega, g), spec) for g in (0.3, 0.6)]
    r = reps[0]
    rel = max(r.h0_defect / r.h0_norm, r.sz_defect / r.sz_norm,
              r.sp_defect / r.sp_norm, r.sm_defect / r.sm_norm)
    linear = abs(reps[1].hg_defect / reps[0].hg_defect - 2.0) / 2.0
    coupling = max(abs(x.coupling_ratio - 1.0) for x in reps)
    ok = rel < 1e-10 and reps[0].hg_defect > 0 and linear < 0.01 and coupling < 0.01
    return _result("grid_hermiticity", rel, 1e-10, params, ok=ok,
                   linearity_error=linear, coupling_ratio_error=coupling)


def check_gauge_identity(cfg):
    mp = ModelParams(cfg.omega, 0.6 * cfg.omega)
    eta = eta_from_g(mp) + cfg.eta_perturbation
    rng = np.random.default_rng(cfg.seed)
    pts = rng.uniform(-1.0, 1.0, size=(cfg.random_points, 4))
    # unit bidisk: rescale points that fall outside
    X = pts[:, 0] + 1j * pts[:, 1]
    P = pts[:, 2] + 1j * pts[:, 3]
    X = np.where(np.abs(X) > 1, X / np.abs(X), X)
    P = np.where(np.abs(P) > 1, P / np.abs(P), P)
    worst = max(gauge_equivalence(x, p, mp, eta=eta).residual for x, p in zip(X, P))
    guard = max(gauge_equivalence(x, p, mp, eta=eta + 1e-3).residual for x, p in zip(X, P))
    params = {"omega": cfg.omega, "g": mp.g, "eta": eta, "seed": cfg.seed,
              "eta_perturbation": cfg.eta_perturbation}
    return _result("classical_gauge_identity", worst, 1e-12, params,
                   ok=worst < 1e-12 and guard > 1e-4, perturbed_residual=guard,
                   points=[[x.real, x.imag, p.real, p.imag] for x, p in zip(X, P)])


def check_orbit(cfg):
    params = {"omega": 1.0, "g": 0.0, "v0": 1.0, "dt": 1e-3, "t": 3.0}
    tr = integrate(PhasePoint(0.0, 1.0), 1e-3, 3000, ModelParams(1.0, 0.0))
    rel = abs(tr.q[-1] - math.sinh(3.0)) / math.sinh(3.0)
    return _result("classical_orbit", rel, 1e-8, params, ok=rel < 1e-8 and tr.energy_drift < 1e-10,
                   energy_drift=tr.energy_drift)


def check_lagrangian(cfg):
    mp = ModelParams(cfg.omega, 0.6 * cfg.omega)
    params = {"omega": cfg.omega, "g": mp.g, "t": 2.0, "dt": 1e-3}
    res = {}
    for dt in (2e-3, 1e-3):
        tr = integrate(PhasePoint(1.0, 0.0, 0.0, Frame.TRANSFORMED), dt, int(round(2.0 / dt)), mp)
        res[dt] = lagrangian_gauge_residual(tr, mp)
    order = math.log2(res[2e-3] / res[1e-3])
    return _result("lagrangian_gauge", res[1e-3], 1e-6, params,
                   ok=res[1e-3] < 1e-6 and 1.8 < order < 2.2, observed_order=order)


def check_figures(cfg):
    params = {"omega": cfg.omega, "fig1_g": list(FIG1_COUPLINGS), "fig2_g": [0.0, 0.5, 1.0, 1.5, 2.0],
              "truncation": cfg.truncation}
    xs = [-1.0, 1.0]
    signs = []
    for g in FIG1_COUPLINGS:
        vs = [v for _, v in potential_profile(ModelParams(cfg.omega, g * cfg.omega), xs)]
        signs.append(int(np.sign(vs[1])))
    fig1 = signs == [-1, -1, 0, 1, 1]
    if cfg.truncation < MIN_CONVERGED_TRUNCATION:
        return _result("figure_structure", 0.0 if fig1 else 1.0, 0.5, params, ok=fig1,
                       potential_signs=signs, spectrum="skipped")
    sweep = spectrum_sweep(cfg.omega, [g * cfg.omega for g in params["fig2_g"]], cfg.truncation, 3,
                           threads=cfg.threads or None)
    fig2 = [p.branch for p in sweep.points] == [
        Branch.IMAGINARY_PAIR, Branch.IMAGINARY_PAIR, Branch.DEGENERATE_ZERO, Branch.REAL, Branch.REAL]
    zero = all(v == 0 for _, v in sweep.points[2].levels)
    ok = fig1 and fig2 and zero
    return _result("figure_structure", 0.0 if ok else 1.0, 0.5, params, ok=ok,
                   potential_signs=signs, branches=[p.branch.value for p in sweep.points])


CHECKS: List[Callable] = [
    check_eigenvalue_law, check_real_branch, check_ep_location, check_ep_identity,
    check_biorthonormality, check_commutators, check_similarity, check_resonances,
    check_hermiticity, check_gauge_identity, check_orbit, check_lagrangian, check_figures,
]


def run_verification(cfg: VerifyConfig = VerifyConfig()) -> dict:
    """Run every check; overall status is "pass" iff no check failed."""
    results = []
    for check in CHECKS:
        t0 = time.perf_counter()
        r = check(cfg)
        r.seconds = time.perf_counter() - t0
        results.append(r)
    failed = [r.name for r in results if r.status == "fail"]
    return {
        "status": "fail" if failed else "pass",
        "failed": failed,
        "skipped": [r.name for r in results if r.status == "skipped"],
        "backend": _accel.backend(),
        "config": asdict(cfg),
        "checks": [asdict(r) for r in results],
    }
