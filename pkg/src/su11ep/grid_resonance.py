"""Position-grid operators, hermiticity audit and complex-scaled resonances.

The grid carries Dirichlet boundaries.  First and second derivatives use one
of three stencils:

``fd2``       3-point central differences, O(h^2)
``fd4``       5-point central differences, O(h^4)  (default)
``spectral``  sinc-DVR differentiation

All first-derivative matrices are real antisymmetric and all second
derivatives real symmetric, so p = -i D is Hermitian on the grid.
"""
import math
import warnings
from dataclasses import dataclass
from typing import Tuple

import numpy as np
import scipy.linalg

from .errors import ConvergenceError, DimensionError, DomainWarning
from .fock_ops import Basis, TruncatedOperator
from .model import ModelParams

STENCILS = ("fd2", "fd4", "spectral")


@dataclass(frozen=True)
class GridSpec:
    x_min: float = -12.0
    x_max: float = 12.0
    points: int = 801
    theta: float = -math.pi / 4
    stencil: str = "fd4"

    def __post_init__(self):
        if not self.x_min < self.x_max:
            raise ValueError("x_min must be below x_max")
        if self.points < 64:
            raise DimensionError(f"points must be at least 64, got {self.points}")
        if abs(self.theta) > math.pi / 2:
            raise ValueError("|theta| must not exceed pi/2")
        if self.stencil not in STENCILS:
            raise ValueError(f"stencil must be one of {STENCILS}")

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.points)

    @property
    def spacing(self) -> float:
        return (self.x_max - self.x_min) / (self.points - 1)

    def with_(self, **changes):
        fields = dict(x_min=self.x_min, x_max=self.x_max, points=self.points,
                      theta=self.theta, stencil=self.stencil)
        fields.update(changes)
        return GridSpec(**fields)


@dataclass(frozen=True)
class ResonanceResult:
    eigenvalues: Tuple[complex, ...]
    targets: Tuple[complex, ...]
    deviations: Tuple[float, ...]


@dataclass(frozen=True)
class HermiticityReport:
    """Frobenius-norm defects ||A - A^H|| (Hermitian) or ||A + A^H|| (anti)."""

    h0_defect: float
    h0_norm: float
    sz_defect: float
    sz_norm: float
    sp_defect: float
    sp_norm: float
    sm_defect: float
    sm_norm: float
    hg_defect: float
    coupling_scale: float

    @property
    def coupling_ratio(self) -> float:
        """hg_defect / (2 g ||S+ - S-||); 1 for an exact anti-Hermitian coupling."""
        return self.hg_defect / self.coupling_scale if self.coupling_scale else float("nan")


def _toeplitz(first_col, first_row):
    return scipy.linalg.toeplitz(first_col, first_row)


def _d1(spec):
    n, h = spec.points, spec.spacing
    col = np.zeros(n)
    if spec.stencil == "fd2":
        col[1] = 0.5
    elif spec.stencil == "fd4":
        col[1], col[2] = 8.0 / 12.0, -1.0 / 12.0
    else:
        k = np.arange(1, n)
        col[1:] = -((-1.0) ** k) / k
    # D[j, j-k] = -col[k], D[j, j+k] = +col[k]
    return _toeplitz(-col, col) / h


def _d2(spec):
    n, h = spec.points, spec.spacing
    col = np.zeros(n)
    if spec.stencil == "fd2":
        col[0], col[1] = -2.0, 1.0
    elif spec.stencil == "fd4":
        col[0], col[1], col[2] = -30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0
    else:
        k = np.arange(1, n)
        col[0] = -math.pi ** 2 / 3.0
        col[1:] = -2.0 * (-1.0) ** k / k ** 2
    return _toeplitz(col, col) / (h * h)


def build_grid_xp(spec: GridSpec):
    """x (diagonal nodes) and p = -i D on the grid."""
    x = TruncatedOperator(np.diag(spec.nodes), Basis.POSITION_GRID)
    p = TruncatedOperator(-1j * _d1(spec), Basis.POSITION_GRID)
    return x, p


def build_grid_p2(spec: GridSpec) -> TruncatedOperator:
    """p^2 = -D2 from the direct second-derivative stencil."""
    return TruncatedOperator(-_d2(spec), Basis.POSITION_GRID)


def grid_generators(spec: GridSpec):
    """(H0 / omega, S_z, S_plus, S_minus) on the grid.

    S_z = -i (p^2 - x^2)/4 and S+- = (i/4)(x^2 + p^2 -+ (xp + px)).
    """
    x, p = build_grid_xp(spec)
    xx = np.diag(spec.nodes ** 2)
    pp = build_grid_p2(spec).entries
    xp = x.entries @ p.entries
    sym = xp + xp.conj().T  # xp + px, as x and p are Hermitian
    h0 = 0.5 * (pp - xx)
    sz = -0.25j * (pp - xx)
    sp = 0.25j * (xx + pp - sym)
    sm = 0.25j * (xx + pp + sym)
    wrap = lambda a: TruncatedOperator(a, Basis.POSITION_GRID)
    return wrap(h0), wrap(sz), wrap(sp), wrap(sm)


def grid_hamiltonian(params: ModelParams, spec: GridSpec) -> TruncatedOperator:
    """omega (p^2 - x^2)/2 + g (S+ - S-), i.e. with the -(i g/2)(xp + px) coupling."""
    h0, _, sp, sm = grid_generators(spec)
    return params.omega * h0 + params.g * (sp - sm)


def _defect(a, sign):
    return float(np.linalg.norm(a - sign * a.conj().T))


def hermiticity_report(params: ModelParams, spec: GridSpec) -> HermiticityReport:
    h0, sz, sp, sm = grid_generators(spec)
    h0 = params.omega * h0
    hg = h0 + params.g * (sp - sm)
    return HermiticityReport(
        h0_defect=_defect(h0.entries, 1), h0_norm=float(np.linalg.norm(h0.entries)),
        sz_defect=_defect(sz.entries, -1), sz_norm=float(np.linalg.norm(sz.entries)),
        sp_defect=_defect(sp.entries, -1), sp_norm=float(np.linalg.norm(sp.entries)),
        sm_defect=_defect(sm.entries, -1), sm_norm=float(np.linalg.norm(sm.entries)),
        hg_defect=_defect(hg.entries, 1),
        coupling_scale=2.0 * params.g * float(np.linalg.norm((sp - sm).entries)),
    )


def hermitian_grid_spectrum(omega: float, spec: GridSpec) -> np.ndarray:
    """Eigenvalues of the unscaled self-adjoint grid matrix omega (p^2 - x^2)/2."""
    h0, _, _, _ = grid_generators(spec)
    return scipy.linalg.eigvalsh(omega * h0.entries)


def required_half_width(levels: int) -> float:
    """Box half-width that holds the first ``levels`` scaled eigenfunctions."""
    return math.sqrt(2 * levels + 1) + 5.0


def complex_scaled_spectrum(omega: float, spec: GridSpec, levels: int = 5) -> ResonanceResult:
    """Lowest eigenvalues of omega/2 (e^{-2i theta} p^2 - e^{2i theta} x^2).

    At theta = -pi/4 this is i omega (p^2 + x^2)/2 with eigenvalues
    +i omega (n + 1/2); theta = +pi/4 gives the conjugate branch.
    """
    if not 1 <= levels <= 8:
        raise ValueError("levels must lie in [1, 8]")
    if spec.theta == 0:
        raise ValueError("theta must be non-zero; use hermitian_grid_spectrum for theta = 0")
    if min(-spec.x_min, spec.x_max) < required_half_width(levels):
        warnings.warn(
            f"box [{spec.x_min}, {spec.x_max}] is narrow for {levels} levels", DomainWarning,
            stacklevel=2)
    xx = np.diag(spec.nodes ** 2)
    pp = -_d2(spec)
    if abs(abs(spec.theta) - math.pi / 4) <= 1e-15:
        # e^{-2i theta} = -e^{2i theta}: a phase times a real symmetric matrix
        phase = -1j if spec.theta > 0 else 1j
        vals = phase * scipy.linalg.eigvalsh(0.5 * omega * (pp + xx))
    else:
        h = 0.5 * omega * (np.exp(-2j * spec.theta) * pp - np.exp(2j * spec.theta) * xx)
        vals = scipy.linalg.eigvals(h)
    if not np.all(np.isfinite(vals)):
        raise ConvergenceError("grid eigenvalues are not finite")
    vals = vals[np.argsort(np.abs(vals))][:levels]
    sign = 1.0 if spec.theta < 0 else -1.0
    targets = sign * 1j * omega * (np.arange(levels) + 0.5)
    devs = np.abs(vals - targets)
    return ResonanceResult(tuple(complex(v) for v in vals), tuple(complex(t) for t in targets),
                           tuple(float(d) for d in devs))
