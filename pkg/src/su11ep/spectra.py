"""Dense non-Hermitian eigensolver, eigenvalue-law checks, branch
classification, coupling sweeps and the dual eigenvector constructions.

Branch classification
---------------------
Below the exceptional point the ket-frame truncation of H converges to
i Gamma_I (n + 1/2).  Above it, that truncation stays on the imaginary axis
and fills in a continuum, while the quarter-turn rotated frame (see
:func:`su11ep.fock_ops.build_rotated_hamiltonian`) converges to the real
ladder Gamma (n + 1/2).  A point is classified by which frame actually
converges: the low levels are computed at truncation N and 3N/4, and the
frame whose levels move less wins if that relative change is below
``conv_tol`` (default: ``params.tol``).  At N = 128 the converging frame
moves by at most ~5e-4 for |g - omega| > 0.01 omega while the other frame
moves by more than 2e-2, so the default tol = 1e-3 separates them.  Inside the EP window |g - omega| <= tol * omega the exact
normal form -omega a^2 is used, whose spectrum is identically zero.
"""
import enum
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
import scipy.linalg

from . import _kernels
from .errors import ConvergenceError, DimensionError, RegimeError
from .fock_ops import (
    TruncatedOperator,
    build_hamiltonian,
    build_normal_position_momentum,
    build_rotated_hamiltonian,
    build_similarity,
    build_similarity_inverse,
    annihilation_from_xp,
    ep_normal_form,
    hamiltonian_from_xp,
)
from .model import ModelParams, Regime, effective_frequency

MAX_DIM = 1024


class Branch(enum.Enum):
    IMAGINARY_PAIR = "ImaginaryPair"
    DEGENERATE_ZERO = "DegenerateZero"
    REAL = "Real"


@dataclass(frozen=True)
class EigenDecomposition:
    values: np.ndarray
    right_vectors: Optional[np.ndarray]
    left_vectors: Optional[np.ndarray]
    residuals: Optional[np.ndarray]


@dataclass(frozen=True)
class SpectrumPoint:
    """Low spectrum at one coupling.

    ``levels`` holds ``(n, eigenvalue)`` pairs.  For an imaginary pair both
    mirror members are listed under the same ``n``, lower-Im first.
    ``frame`` names the matrix the values came from and ``convergence`` is
    the relative change of its levels between truncations N and 3N/4.
    """

    g: float
    levels: Tuple[Tuple[int, complex], ...]
    branch: Branch
    frame: str = ""
    convergence: float = 0.0


@dataclass(frozen=True)
class SweepResult:
    points: Tuple[SpectrumPoint, ...]
    ep_estimate: Optional[float]

    def branches(self):
        return [p.branch for p in self.points]


@dataclass(frozen=True)
class LawResidual:
    n: int
    branch: str
    target: complex
    value: complex
    residual: float

    @property
    def relative(self) -> float:
        return self.residual / abs(self.target)


@dataclass(frozen=True)
class EPReport:
    identity_residual: float
    normal_form_max_abs_eigenvalue: float
    smallest_by_truncation: dict = field(default_factory=dict)

    @property
    def decreasing(self) -> bool:
        vals = [self.smallest_by_truncation[k] for k in sorted(self.smallest_by_truncation)]
        return all(b < a for a, b in zip(vals, vals[1:]))


@dataclass(frozen=True)
class DualPair:
    """Right and left eigenvectors R^-1 e_n and R e_n, paired by transpose."""

    n: int
    eigenvalue: complex
    right: np.ndarray
    left: np.ndarray
    residual: float


# --------------------------------------------------------------------------
# eigensolver


def _as_array(h):
    a = h.entries if isinstance(h, TruncatedOperator) else h
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] > MAX_DIM:
        raise DimensionError(f"dimension {a.shape[0]} exceeds the dense-solver limit {MAX_DIM}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    return a


def _order(values):
    # |eps| ascending, ties broken by ascending Im; magnitudes are rounded so
    # mirror pairs that differ only by roundoff count as ties
    mag = np.round(np.abs(values), 10)
    return np.lexsort((values.imag, mag))


def _schur(a, balance):
    n = a.shape[0]
    scale = np.ones(n)
    if balance and n > 1:
        a, t = scipy.linalg.matrix_balance(a, permute=False)
        scale = np.diag(t).real.copy()
    h, q = _kernels.hessenberg(a)
    if not _kernels.schur(h, q, 30 * max(n, 1)):
        raise ConvergenceError(f"QR iteration did not converge for dimension {n}")
    return h, q, scale


def diagonalize(h, balance: bool = True) -> EigenDecomposition:
    """All eigenpairs of a dense complex matrix, ordered by |eps|.

    Balancing, Householder Hessenberg reduction and single-shift complex QR
    give the Schur form; eigenvectors come from triangular back substitution.
    Left vectors are the rows of V^-1 conjugated, so ``left.conj().T @ right``
    is the identity for a diagonalisable matrix.  ``residuals[k]`` is
    ||A v_k - eps_k v_k|| for unit-norm v_k.
    """
    a = _as_array(h)
    n = a.shape[0]
    t, q, scale = _schur(a, balance)
    values = np.diag(t).copy()
    y = _kernels.triangular_eigvecs(t)
    v = scale[:, None] * (q @ y)
    v /= np.linalg.norm(v, axis=0)
    residuals = np.linalg.norm(a @ v - v * values, axis=0)
    try:
        w = np.linalg.inv(v).conj().T
        if not np.all(np.isfinite(w)):
            raise np.linalg.LinAlgError
    except np.linalg.LinAlgError:
        w = np.linalg.pinv(v).conj().T
    idx = _order(values)
    return EigenDecomposition(values[idx], v[:, idx], w[:, idx], residuals[idx])


def _parity_blocks(a):
    n = a.shape[0]
    if n >= 2 and not a[0::2, 1::2].any() and not a[1::2, 0::2].any():
        return [a[0::2, 0::2], a[1::2, 1::2]]
    return [a]


def eigenvalues(h, balance: bool = True) -> np.ndarray:
    """Eigenvalues only, ordered by |eps|.

    Matrices whose even and odd index sets do not couple (every Hamiltonian
    built here) are split into the two parity blocks first.
    """
    a = _as_array(h)
    parts = []
    for block in _parity_blocks(a):
        t, _, _ = _schur(np.ascontiguousarray(block), balance)
        parts.append(np.diag(t))
    values = np.concatenate(parts)
    return values[_order(values)]


# --------------------------------------------------------------------------
# eigenvalue law


def _lowest(values, count, half_plane=None):
    if half_plane == "upper":
        values = values[values.imag > 0]
    elif half_plane == "lower":
        values = values[values.imag < 0]
    elif half_plane == "right":
        values = values[values.real > 0]
    return values[:count]


def verify_eigenvalue_law(params: ModelParams, levels: int) -> List[LawResidual]:
    """Distance from each target level to the nearest computed eigenvalue.

    Below the EP the targets are +i Gamma_I (n + 1/2) from the ket matrix and
    -i Gamma_I (n + 1/2) from the bra matrix.  Above it the targets are
    Gamma (n + 1/2) from the rotated-frame matrix.
    """
    if levels < 1 or levels > params.truncation // 8:
        raise ValueError(f"levels must lie in [1, truncation/8], got {levels}")
    ef = effective_frequency(params)
    if ef.regime is Regime.AT_EP:
        raise RegimeError("the eigenvalue law degenerates at the exceptional point")
    n = np.arange(levels)
    out = []
    if ef.regime is Regime.BELOW_EP:
        for branch, sign in (("ket", 1.0), ("bra", -1.0)):
            vals = eigenvalues(build_hamiltonian(params, branch))
            for k, target in zip(n, sign * 1j * ef.value * (n + 0.5)):
                j = int(np.argmin(np.abs(vals - target)))
                out.append(LawResidual(int(k), branch, complex(target), complex(vals[j]),
                                       float(abs(vals[j] - target))))
    else:
        vals = eigenvalues(build_rotated_hamiltonian(params))
        for k, target in zip(n, ef.value * (n + 0.5)):
            j = int(np.argmin(np.abs(vals - target)))
            out.append(LawResidual(int(k), "real", complex(target), complex(vals[j]),
                                   float(abs(vals[j] - target))))
    return out


# --------------------------------------------------------------------------
# classification and sweeps


def _frame_levels(params, frame, levels):
    build = build_hamiltonian if frame == "ket" else build_rotated_hamiltonian
    plane = "upper" if frame == "ket" else "right"
    coarse = params.with_(truncation=max(4, (3 * params.truncation) // 4))
    fine_vals = _lowest(eigenvalues(build(params)), levels, plane)
    coarse_vals = _lowest(eigenvalues(build(coarse)), levels, plane)
    if len(fine_vals) < levels or len(coarse_vals) < levels:
        return fine_vals, np.inf
    change = np.max(np.abs(fine_vals - coarse_vals) / np.maximum(np.abs(fine_vals), 1e-300))
    return fine_vals, float(change)


def spectrum_point(params: ModelParams, levels: int = 3, conv_tol: Optional[float] = None) -> SpectrumPoint:
    """Classify the spectrum at ``params.g`` and report its lowest levels."""
    if levels < 1:
        raise ValueError("levels must be positive")
    if conv_tol is None:
        conv_tol = params.tol
    ef = effective_frequency(params)
    if ef.regime is Regime.AT_EP:
        vals = eigenvalues(ep_normal_form(params.omega, params.truncation))
        lv = tuple((k, complex(vals[k])) for k in range(levels))
        return SpectrumPoint(params.g, lv, Branch.DEGENERATE_ZERO, "normal", 0.0)
    ket_vals, ket_change = _frame_levels(params, "ket", levels)
    rot_vals, rot_change = _frame_levels(params, "rotated", levels)
    if ket_change <= rot_change:
        frame, vals, change = "ket", ket_vals, ket_change
    else:
        frame, vals, change = "rotated", rot_vals, rot_change
    if change > conv_tol:
        lv = tuple((k, complex(v)) for k, v in enumerate(vals))
        return SpectrumPoint(params.g, lv, Branch.DEGENERATE_ZERO, frame, change)
    if frame == "ket":
        # the bra matrix is the entrywise conjugate, so its spectrum is the mirror
        lv = []
        for k, v in enumerate(vals):
            lv.extend([(k, complex(np.conj(v))), (k, complex(v))])
        return SpectrumPoint(params.g, tuple(lv), Branch.IMAGINARY_PAIR, frame, change)
    lv = tuple((k, complex(v)) for k, v in enumerate(vals))
    return SpectrumPoint(params.g, lv, Branch.REAL, frame, change)


def _ep_from_points(points):
    last_imag = None
    for p in points:
        if p.branch is Branch.IMAGINARY_PAIR:
            last_imag = p.g
        elif p.branch is Branch.REAL and last_imag is not None:
            return 0.5 * (last_imag + p.g)
    zeros = [p.g for p in points if p.branch is Branch.DEGENERATE_ZERO]
    return float(np.mean(zeros)) if zeros else None


def default_threads() -> int:
    return max(1, len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else os.cpu_count() or 1)


def spectrum_sweep(omega: float, g_grid, truncation: int = 128, levels: int = 3,
                   tol: float = 1e-3, threads: Optional[int] = None,
                   conv_tol: Optional[float] = None) -> SweepResult:
    """Classify every coupling in ascending ``g_grid``.

    ``ep_estimate`` is the midpoint between the last imaginary-pair point and
    the first real point after it, or the mean of the degenerate points if
    no such flip occurs, or ``None``.
    """
    g_grid = [float(g) for g in g_grid]
    if any(b < a for a, b in zip(g_grid, g_grid[1:])):
        raise ValueError("g_grid must be sorted ascending")
    params = [ModelParams(omega, g, truncation, tol) for g in g_grid]
    workers = threads or default_threads()
    if workers == 1 or len(params) <= 1:
        points = [spectrum_point(p, levels, conv_tol) for p in params]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            points = list(pool.map(lambda p: spectrum_point(p, levels, conv_tol), params))
    return SweepResult(tuple(points), _ep_from_points(points))


def locate_ep(omega: float, g_lo: float, g_hi: float, truncation: int = 128,
              iterations: int = 20, tol: float = 1e-3) -> Tuple[float, float]:
    """Bisect the imaginary-pair and real classification edges.

    ``g_lo`` must classify as an imaginary pair and ``g_hi`` as real.
    Returns the bracket (last imaginary-pair g, first real g).
    """
    def branch(g):
        return spectrum_point(ModelParams(omega, g, truncation, tol)).branch

    if branch(g_lo) is not Branch.IMAGINARY_PAIR or branch(g_hi) is not Branch.REAL:
        raise ValueError("bracket must run from an imaginary-pair point to a real point")

    def edge(pred):
        lo, hi = g_lo, g_hi
        for _ in range(iterations):
            mid = 0.5 * (lo + hi)
            if pred(mid):
                hi = mid
            else:
                lo = mid
        return lo, hi

    last_imag, _ = edge(lambda g: branch(g) is not Branch.IMAGINARY_PAIR)
    _, first_real = edge(lambda g: branch(g) is Branch.REAL)
    return last_imag, first_real


# --------------------------------------------------------------------------
# exceptional point


def ep_degeneracy_check(omega: float, truncation: int = 128) -> EPReport:
    """Check H(g = omega) = -omega a^2 and the nilpotency of that form.

    Also records the smallest |eps| of the ket-frame truncation at g = omega
    for N = truncation/4, truncation/2 and truncation.
    """
    if truncation < 16:
        raise DimensionError("truncation must be at least 16")
    x, p = build_normal_position_momentum(truncation)
    a = annihilation_from_xp(x, p)
    h_ep = hamiltonian_from_xp(x, p, omega, omega)
    identity_residual = float(np.max(np.abs((h_ep + omega * (a @ a)).interior(2))))
    nf = diagonalize(ep_normal_form(omega, truncation))
    smallest = {}
    for n in (truncation // 4, truncation // 2, truncation):
        vals = eigenvalues(build_hamiltonian(ModelParams(omega, omega, n)))
        smallest[n] = float(np.abs(vals).min())
    return EPReport(identity_residual, float(np.abs(nf.values).max()), smallest)


# --------------------------------------------------------------------------
# dual eigenvectors and densities


def original_eigenvectors(params: ModelParams, n: int) -> DualPair:
    """right = R^-1 e_n, left = R e_n, with left_m^T right_n = delta_mn."""
    ef = effective_frequency(params)
    if ef.regime is not Regime.BELOW_EP:
        raise RegimeError("dual eigenvectors from R(eta) exist only below the exceptional point")
    if not 0 <= n < params.truncation:
        raise ValueError(f"n must lie in [0, truncation), got {n}")
    r = build_similarity(params).entries
    r_inv = build_similarity_inverse(params).entries
    right = r_inv[:, n].copy()
    left = r[:, n].copy()
    eps = 1j * ef.value * (n + 0.5)
    h = build_hamiltonian(params).entries
    residual = float(np.linalg.norm(h @ right - eps * right) / np.linalg.norm(right))
    return DualPair(n, eps, right, left, residual)


def density_invariance(params: ModelParams, n: int) -> float:
    """||[H, rho_n]|| on the interior block, rho_n = right_n left_n^T."""
    if not 0 <= n < params.truncation // 4:
        raise ValueError(f"n must lie in [0, truncation/4), got {n}")
    pair = original_eigenvectors(params, n)
    rho = np.outer(pair.right, pair.left)
    h = build_hamiltonian(params).entries
    comm = h @ rho - rho @ h
    edge = params.truncation - 4
    return float(np.linalg.norm(comm[:edge, :edge]))
