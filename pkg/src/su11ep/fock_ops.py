"""Truncated matrix representations of the boson and SU(1,1) operators.

All builders return :class:`TruncatedOperator` values.  Ladder products
corrupt the last rows and columns of a truncated matrix, so identity checks
compare interior blocks only: drop 2 edges for products of two ladders and
4 for products of four.
"""
import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import BasisError, ConvergenceError, DimensionError
from .model import ModelParams, eta_from_g

SQRT_2I = np.sqrt(2j)


class Basis(enum.Enum):
    BIORTHOGONAL_NUMBER = "BiorthogonalNumber"
    NORMAL_NUMBER = "NormalNumber"
    POSITION_GRID = "PositionGrid"


class LadderKind(enum.Enum):
    RAISE = "Raise"
    LOWER = "Lower"


@dataclass(frozen=True, eq=False)
class TruncatedOperator:
    """Immutable dense complex matrix tagged with the basis it lives in.

    Arithmetic between operators in different bases raises :class:`BasisError`.
    """

    entries: np.ndarray
    basis: Basis = Basis.BIORTHOGONAL_NUMBER

    def __post_init__(self):
        a = np.array(self.entries, dtype=np.complex128, copy=True)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
            raise DimensionError(f"expected a non-empty square matrix, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ValueError("operator entries must be finite")
        a.flags.writeable = False
        object.__setattr__(self, "entries", a)
        if not isinstance(self.basis, Basis):
            raise BasisError(f"unknown basis {self.basis!r}")

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def _check(self, other):
        if not isinstance(other, TruncatedOperator):
            return NotImplemented
        if other.basis is not self.basis:
            raise BasisError(f"cannot combine {self.basis.value} with {other.basis.value}")
        if other.dim != self.dim:
            raise DimensionError(f"dimension mismatch: {self.dim} vs {other.dim}")
        return other

    def _new(self, entries):
        return TruncatedOperator(entries, self.basis)

    def __matmul__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return self._new(self.entries @ other.entries)

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return self._new(self.entries + other.entries)

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return self._new(self.entries - other.entries)

    def __mul__(self, scalar):
        if not np.isscalar(scalar):
            return NotImplemented
        return self._new(self.entries * scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        if not np.isscalar(scalar):
            return NotImplemented
        return self._new(self.entries / scalar)

    def __neg__(self):
        return self._new(-self.entries)

    def dag(self):
        """Conjugate transpose."""
        return self._new(self.entries.conj().T)

    def transpose(self):
        return self._new(self.entries.T)

    def conj(self):
        return self._new(self.entries.conj())

    def interior(self, edge: int) -> np.ndarray:
        """Top-left block with the last ``edge`` rows and columns dropped."""
        if not 0 <= edge < self.dim:
            raise DimensionError(f"edge {edge} out of range for dim {self.dim}")
        return self.entries[: self.dim - edge, : self.dim - edge]

    def __repr__(self):
        return f"TruncatedOperator(dim={self.dim}, basis={self.basis.value})"


def identity(n: int, basis: Basis = Basis.BIORTHOGONAL_NUMBER) -> TruncatedOperator:
    return TruncatedOperator(np.eye(n), basis)


def commutator(a: TruncatedOperator, b: TruncatedOperator) -> TruncatedOperator:
    return a @ b - b @ a


def _require(n, minimum):
    if isinstance(n, bool) or int(n) != n or n < minimum:
        raise DimensionError(f"dimension must be an integer >= {minimum}, got {n!r}")
    return int(n)


def _ladder_array(n, kind):
    off = np.sqrt(np.arange(1, n, dtype=float))
    if kind is LadderKind.LOWER:
        return np.diag(off, 1)
    if kind is LadderKind.RAISE:
        return np.diag(off, -1)
    raise ValueError(f"unknown ladder kind {kind!r}")


def build_ladder(n: int, kind: LadderKind) -> TruncatedOperator:
    """Imaginary-frequency ladder b- (``LOWER``) or b+ (``RAISE``)."""
    n = _require(n, 2)
    return TruncatedOperator(_ladder_array(n, kind), Basis.BIORTHOGONAL_NUMBER)


def exact_ladder_commutator(n: int) -> np.ndarray:
    """[b-, b+] in exact integer arithmetic, as an ``int`` object array.

    Ladder entries are sqrt(k); products are formed on the integer radicands
    so sqrt(k)*sqrt(k) is exactly k.
    """
    n = _require(n, 2)
    lower = {(k - 1, k): k for k in range(1, n)}
    raise_ = {(k, k - 1): k for k in range(1, n)}

    def product(a, b):
        out = {}
        for (i, k), ra in a.items():
            for (k2, j), rb in b.items():
                if k2 != k:
                    continue
                r = ra * rb
                s = math.isqrt(r)
                if s * s != r:
                    raise ArithmeticError(f"radicand {r} is not a perfect square")
                out[(i, j)] = out.get((i, j), 0) + s
        return out

    ab = product(lower, raise_)
    ba = product(raise_, lower)
    c = np.zeros((n, n), dtype=object)
    c[:, :] = 0
    for (i, j), v in ab.items():
        c[i, j] += v
    for (i, j), v in ba.items():
        c[i, j] -= v
    return c


def build_su11(n: int):
    """(S_z, S_plus, S_minus) from ladder products."""
    n = _require(n, 4)
    bm = build_ladder(n, LadderKind.LOWER)
    bp = build_ladder(n, LadderKind.RAISE)
    sz = 0.5 * (bp @ bm + 0.5 * identity(n))
    sp = 0.5 * (bp @ bp)
    sm = 0.5 * (bm @ bm)
    return sz, sp, sm


def _hamiltonian_array(n, omega, g):
    k = np.arange(n, dtype=float)
    h = np.diag(1j * omega * (k + 0.5))
    off = 0.5 * g * np.sqrt((k[:-2] + 1.0) * (k[:-2] + 2.0))
    h += np.diag(off, -2) - np.diag(off, 2)
    return h


def build_hamiltonian(params: ModelParams, branch: str = "ket") -> TruncatedOperator:
    """H = 2i omega S_z + g (S_plus - S_minus), pentadiagonal.

    ``branch="bra"`` returns the entrywise conjugate, whose spectrum is the
    mirrored -i branch.
    """
    n = _require(params.truncation, 4)
    h = _hamiltonian_array(n, params.omega, params.g)
    if branch == "bra":
        h = h.conj()
    elif branch != "ket":
        raise ValueError(f"branch must be 'ket' or 'bra', got {branch!r}")
    return TruncatedOperator(h, Basis.BIORTHOGONAL_NUMBER)


def build_rotated_hamiltonian(params: ModelParams) -> TruncatedOperator:
    """H in the quarter-turn rotated phase-space frame, a Hermitian matrix.

    Rotating (x, p) by a quarter turn maps H(omega, g) onto i*H(g, omega).
    Its complex-scaled truncation is the Hermitian pentadiagonal matrix with
    diagonal g(k + 1/2) and off-diagonals +-i omega sqrt((k+1)(k+2))/2, which
    converges to Gamma(n + 1/2) above the exceptional point.
    """
    n = _require(params.truncation, 4)
    m = 1j * _hamiltonian_array(n, params.g, params.omega).conj()
    return TruncatedOperator(m, Basis.BIORTHOGONAL_NUMBER)


def build_position_momentum(n: int):
    """x = (b- + b+)/sqrt(2i), p = (b- - b+)/sqrt(2i)."""
    n = _require(n, 2)
    bm = _ladder_array(n, LadderKind.LOWER)
    bp = _ladder_array(n, LadderKind.RAISE)
    x = TruncatedOperator((bm + bp) / SQRT_2I, Basis.BIORTHOGONAL_NUMBER)
    p = TruncatedOperator((bm - bp) / SQRT_2I, Basis.BIORTHOGONAL_NUMBER)
    return x, p


def hamiltonian_from_xp(x: TruncatedOperator, p: TruncatedOperator, omega: float, g: float):
    """omega (p^2 - x^2)/2 - (i g/2)(xp + px) for any matching x, p pair."""
    xx, pp = x @ x, p @ p
    h = 0.5 * omega * (pp - xx)
    if g:
        h = h - (0.5j * g) * (x @ p + p @ x)
    return h


def build_normal_boson(n: int):
    """Ordinary ladder pair (a, a_dag) in the normal number basis."""
    n = _require(n, 2)
    a = TruncatedOperator(_ladder_array(n, LadderKind.LOWER), Basis.NORMAL_NUMBER)
    return a, a.dag()


def build_normal_position_momentum(n: int):
    """x = (a + a_dag)/sqrt 2, p = (a - a_dag)/(i sqrt 2) in the normal basis."""
    a, ad = build_normal_boson(n)
    return (a + ad) / math.sqrt(2.0), (a - ad) / (1j * math.sqrt(2.0))


def annihilation_from_xp(x: TruncatedOperator, p: TruncatedOperator) -> TruncatedOperator:
    return (x + 1j * p) / math.sqrt(2.0)


def ep_normal_form(omega: float, n: int) -> TruncatedOperator:
    """-omega a^2, the strictly upper-triangular form of H at g = omega."""
    a, _ = build_normal_boson(n)
    return -omega * (a @ a)


# Higham (2005) scaling and squaring with a [13/13] Pade approximant.  With
# ||A||_1 / 2^s <= THETA_13 the approximant's backward error is below the
# unit roundoff 2^-53 in exact arithmetic; rounding in the squaring phase
# adds O(2^s u ||A||).
_THETA_13 = 5.371920351148152
_PADE_13 = (
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
    1187353796428800.0, 129060195264000.0, 10559470521600.0,
    670442572800.0, 33522128640.0, 1323241920.0, 40840800.0,
    960960.0, 16380.0, 182.0, 1.0,
)


def _expm_array(a):
    n = a.shape[0]
    norm = np.linalg.norm(a, 1)
    if not np.isfinite(norm):
        raise ConvergenceError("matrix exponential input has non-finite norm")
    if norm == 0.0:
        return np.eye(n, dtype=a.dtype)
    s = 0
    if norm > _THETA_13:
        s = int(math.ceil(math.log2(norm / _THETA_13)))
    a = a / (2.0 ** s)
    b = _PADE_13
    eye = np.eye(n, dtype=a.dtype)
    a2 = a @ a
    a4 = a2 @ a2
    a6 = a4 @ a2
    u = a @ (a6 @ (b[13] * a6 + b[11] * a4 + b[9] * a2)
             + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * eye)
    v = (a6 @ (b[12] * a6 + b[10] * a4 + b[8] * a2)
         + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * eye)
    r = np.linalg.solve(v - u, v + u)
    for _ in range(s):
        r = r @ r
    if not np.all(np.isfinite(r)):
        raise ConvergenceError("matrix exponential overflowed during squaring")
    return r


def matrix_exponential(a: TruncatedOperator) -> TruncatedOperator:
    """exp(a) by Pade-13 scaling and squaring."""
    return TruncatedOperator(_expm_array(np.asarray(a.entries, dtype=np.complex128)), a.basis)


def similarity_from_eta(eta: float, n: int) -> TruncatedOperator:
    """R(eta) = exp(-i (eta/2)(S_plus + S_minus)).  R(-eta) is its inverse."""
    _, sp, sm = build_su11(n)
    return matrix_exponential((-0.5j * eta) * (sp + sm))


def build_similarity(params: ModelParams) -> TruncatedOperator:
    """R(eta) with eta from :func:`su11ep.model.eta_from_g`; g must be below omega."""
    return similarity_from_eta(eta_from_g(params), params.truncation)


def build_similarity_inverse(params: ModelParams) -> TruncatedOperator:
    return similarity_from_eta(-eta_from_g(params), params.truncation)


def conjugate(r: TruncatedOperator, h: TruncatedOperator, r_inv: TruncatedOperator = None):
    """R H R^-1.  Without ``r_inv`` the inverse is applied by a linear solve."""
    if r.dim != h.dim:
        raise DimensionError(f"dimension mismatch: {r.dim} vs {h.dim}")
    if r.basis is not h.basis:
        raise BasisError(f"cannot combine {r.basis.value} with {h.basis.value}")
    rh = r.entries @ h.entries
    if r_inv is not None:
        return r @ h @ r_inv
    # X = RH R^-1  <=>  R^T X^T = (RH)^T
    return TruncatedOperator(np.linalg.solve(r.entries.T, rh.T).T, h.basis)
