"""Exact dual eigenfunctions of the inverted oscillator.

Ket functions are  psi_r,n(x) = A_n P_n(x) exp(-i x^2/2)  and bra functions
psi_l,n(x) = B_n Q_n(x) exp(+i x^2/2), where P_n, Q_n have Gaussian-rational
coefficients and the prefactors

    A_n = w^n  2^(-n/2) / sqrt(n!) / sqrt(N_r),    N_r = sqrt(pi/i)
    B_n = w^-n 2^(-n/2) / sqrt(n!) / sqrt(N_l),    N_l = sqrt(pi/-i)

with w = exp(i pi/4) are carried as exponent metadata.  Integrals against
exp(-i x^2) are evaluated with the regularised Fresnel moments

    int x^(2k) exp(-i x^2) dx = c_k sqrt(pi/i),   c_k = (2k-1)!! / (2i)^k,

so every inner product closes in Q(i) with no rounding.
"""
import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np


@dataclass(frozen=True)
class GaussianRational:
    """Exact element re + i*im of Q(i)."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @classmethod
    def coerce(cls, v):
        if isinstance(v, GaussianRational):
            return v
        if isinstance(v, (int, Fraction)):
            return cls(Fraction(v))
        if isinstance(v, complex):
            return cls(Fraction(v.real), Fraction(v.imag))
        raise TypeError(f"cannot make an exact Gaussian rational from {type(v).__name__}")

    def __add__(self, other):
        o = self.coerce(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-self.coerce(other))

    def __rsub__(self, other):
        return self.coerce(other) - self

    def __mul__(self, other):
        o = self.coerce(other)
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self.coerce(other)
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return self * GaussianRational(o.re / d, -o.im / d)

    def __rtruediv__(self, other):
        return self.coerce(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return GaussianRational(1) / (self ** -k)
        out, base = GaussianRational(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        try:
            o = self.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def conj(self):
        return GaussianRational(self.re, -self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __str__(self):
        if not self.im:
            return str(self.re)
        im = self.im
        if im == 1:
            ims = "i"
        elif im == -1:
            ims = "-i"
        elif im.denominator == 1:
            ims = f"{im}i"
        else:
            ims = f"({im})i"
        if not self.re:
            return ims
        sign = "" if ims.startswith("-") else "+"
        return f"{self.re}{sign}{ims}"

    def __repr__(self):
        return f"GaussianRational({self})"


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)


@dataclass(frozen=True)
class ComplexPolynomial:
    """Polynomial with Gaussian-rational coefficients, lowest power first."""

    coeffs: Tuple[GaussianRational, ...] = ()

    def __post_init__(self):
        c = [GaussianRational.coerce(v) for v in self.coeffs]
        while c and not c[-1]:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> GaussianRational:
        return self.coeffs[-1] if self.coeffs else ZERO

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, k: int) -> GaussianRational:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else ZERO

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        return ComplexPolynomial(tuple(self.coeff(k) + other.coeff(k) for k in range(n)))

    def __sub__(self, other):
        return self + other.scale(GaussianRational(-1))

    def __mul__(self, other):
        if self.is_zero() or other.is_zero():
            return ComplexPolynomial()
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] = out[i + j] + a * b
        return ComplexPolynomial(tuple(out))

    def scale(self, s) -> "ComplexPolynomial":
        s = GaussianRational.coerce(s)
        return ComplexPolynomial(tuple(c * s for c in self.coeffs))

    def mul_x(self) -> "ComplexPolynomial":
        return ComplexPolynomial((ZERO,) + self.coeffs) if self.coeffs else self

    def derivative(self) -> "ComplexPolynomial":
        return ComplexPolynomial(tuple(c * k for k, c in enumerate(self.coeffs) if k > 0))

    def conj(self) -> "ComplexPolynomial":
        return ComplexPolynomial(tuple(c.conj() for c in self.coeffs))

    def __call__(self, x):
        x = np.asarray(x, dtype=np.complex128)
        out = np.zeros_like(x)
        for c in reversed(self.coeffs):
            out = out * x + complex(c)
        return out

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            cs = str(c) if (not c.re or not c.im) else f"({c})"
            if k == 0:
                terms.append(cs)
            else:
                xs = "x" if k == 1 else f"x^{k}"
                if c == ONE:
                    cs = ""
                elif c == -ONE:
                    cs = "-"
                terms.append(f"{cs}{xs}")
        return " + ".join(terms).replace("+ -", "- ")


class Half(enum.Enum):
    KET = "ket"
    BRA = "bra"


@dataclass(frozen=True)
class NormMeta:
    """Prefactor  i^i_exp * 2^two_exp / sqrt(factorial!) / sqrt(N).

    ``i_exp`` is a multiple of 1/2 with i^(1/2) = w, and
    ``sqrt_pi_over_i`` selects N = sqrt(pi/i) (ket) or sqrt(pi/-i) (bra).
    """

    two_exp: Fraction
    i_exp: Fraction
    factorial: int
    sqrt_pi_over_i: bool

    def value(self) -> complex:
        n_sq = math.sqrt(math.pi) * np.exp((-0.25j if self.sqrt_pi_over_i else 0.25j) * math.pi)
        return complex(
            np.exp(0.5j * math.pi * float(self.i_exp))
            * 2.0 ** float(self.two_exp)
            / math.sqrt(math.factorial(self.factorial))
            / np.sqrt(n_sq)
        )


@dataclass(frozen=True)
class EigenfunctionHalf:
    half: Half
    n: int
    poly: ComplexPolynomial
    norm_meta: NormMeta

    @property
    def gaussian_sign(self) -> int:
        """-1 for exp(-i x^2/2) (ket), +1 for exp(+i x^2/2) (bra)."""
        return -1 if self.half is Half.KET else 1


class MomentTable:
    """Fresnel moments c_k, built by c_(k+1) = c_k (2k+1)/(2i)."""

    def __init__(self):
        self._c = [ONE]

    def __getitem__(self, k: int) -> GaussianRational:
        if k < 0:
            raise IndexError("moment index must be non-negative")
        while len(self._c) <= k:
            j = len(self._c) - 1
            self._c.append(self._c[j] * (2 * j + 1) / GaussianRational(0, 2))
        return self._c[k]

    def moment(self, power: int) -> GaussianRational:
        """Coefficient of sqrt(pi/i) in int x^power exp(-i x^2) dx."""
        return ZERO if power % 2 else self[power // 2]


_MOMENTS = MomentTable()


def fresnel_moment(k: int) -> GaussianRational:
    """c_k = (2k-1)!!/(2i)^k."""
    if k < 0:
        raise ValueError("k must be non-negative")
    return _MOMENTS[k]


def _raise(poly: ComplexPolynomial, sigma: int, tau: int) -> ComplexPolynomial:
    # (x + sigma i d/dx)(P exp(tau i x^2/2)) = ((1 - sigma tau) x P + sigma i P') exp(...)
    out = poly.derivative().scale(GaussianRational(0, sigma))
    if 1 - sigma * tau:
        out = out + poly.mul_x().scale(1 - sigma * tau)
    return out


@lru_cache(maxsize=None)
def _poly(half: Half, n: int) -> ComplexPolynomial:
    if n == 0:
        return ComplexPolynomial((ONE,))
    if half is Half.KET:
        return _raise(_poly(half, n - 1), +1, -1)
    return _raise(_poly(half, n - 1), -1, +1)


def _meta(half: Half, n: int) -> NormMeta:
    i_exp = Fraction(n, 2) if half is Half.KET else Fraction(-n, 2)
    return NormMeta(Fraction(-n, 2), i_exp, n, half is Half.KET)


def generate_polynomial(half: Half, n: int) -> EigenfunctionHalf:
    """P_n (ket, P_(n+1) = 2x P_n + i P_n') or Q_n (bra, Q_(n+1) = 2x Q_n - i Q_n')."""
    half = Half(half)
    if n < 0:
        raise ValueError("n must be non-negative")
    return EigenfunctionHalf(half, n, _poly(half, n), _meta(half, n))


def _exact_sqrt(q: Fraction) -> Optional[Fraction]:
    if q < 0:
        return None
    a, b = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if a * a == q.numerator and b * b == q.denominator:
        return Fraction(a, b)
    return None


def inner_product(m: int, n: int) -> GaussianRational:
    """Exact value of int conj(psi_l,m) psi_r,n dx.

    The sqrt(pi/i) of the ket normalisation cancels against the Fresnel
    measure and the conjugated bra normalisation; the remaining prefactor is
    w^(m+n) 2^(-(m+n)/2) / sqrt(m! n!).
    """
    if m < 0 or n < 0:
        raise ValueError("indices must be non-negative")
    bra = generate_polynomial(Half.BRA, m).poly.conj()
    ket = generate_polynomial(Half.KET, n).poly
    prod = bra * ket
    s = ZERO
    for k in range(0, len(prod.coeffs), 2):
        c = prod.coeffs[k]
        if c:
            s = s + c * _MOMENTS[k // 2]
    if not s:
        return ZERO
    if (m + n) % 2:
        raise ArithmeticError("odd total degree with non-zero moment sum")
    root = _exact_sqrt(Fraction(math.factorial(m) * math.factorial(n)))
    if root is None:
        raise ArithmeticError(f"inner product ({m}, {n}) is not in Q(i)")
    half_deg = (m + n) // 2
    return s * (I ** half_deg) * Fraction(1, 2 ** half_deg) / root


@dataclass(frozen=True)
class LadderCheck:
    """Squared ladder factors found by acting on the n-th member.

    ``lower_factor_sq`` is ``None`` when the lowering operator annihilates
    the state.  Expected values: ket n and n+1, bra -n and -(n+1).
    """

    half: Half
    n: int
    lower_factor_sq: Optional[GaussianRational]
    raise_factor_sq: GaussianRational
    lower_ok: bool
    raise_ok: bool

    @property
    def ok(self) -> bool:
        return self.lower_ok and self.raise_ok


def _prefactor_sq_ratio(half: Half, n: int, m: int) -> GaussianRational:
    # (A_n / A_m)^2 = i^(+-(n-m)) 2^(m-n) m!/n!
    sign = 1 if half is Half.KET else -1
    return (I ** (sign * (n - m))) * (Fraction(2) ** (m - n)) * Fraction(
        math.factorial(m), math.factorial(n))


def _factor_sq(half, n, op_sigma):
    """Squared c with b psi_n = c psi_m, b = sqrt(i/2)(x + sigma i d/dx)."""
    tau = -1 if half is Half.KET else 1
    src = generate_polynomial(half, n)
    image = _raise(src.poly, op_sigma, tau)
    if image.is_zero():
        return None, None
    m = image.degree
    target = generate_polynomial(half, m).poly
    ratio = image.leading / target.leading
    if image != target.scale(ratio):
        return m, False
    # c^2 = (i/2) (A_n/A_m)^2 ratio^2
    return m, GaussianRational(0, Fraction(1, 2)) * _prefactor_sq_ratio(half, n, m) * ratio * ratio


def ladder_action_check(n: int, half: Half = Half.KET) -> LadderCheck:
    """Act with b- and b+ in coordinate form on the n-th member.

    b+- = sqrt(i/2)(x -+ p), p = -i d/dx.  For kets b- lowers and b+
    raises; for bras the roles swap.
    """
    half = Half(half)
    if n < 0:
        raise ValueError("n must be non-negative")
    lower_sigma, raise_sigma = (-1, +1) if half is Half.KET else (+1, -1)
    sign = 1 if half is Half.KET else -1
    m_lo, lo = _factor_sq(half, n, lower_sigma)
    m_hi, hi = _factor_sq(half, n, raise_sigma)
    if n == 0:
        lower_ok = lo is None
    else:
        lower_ok = m_lo == n - 1 and isinstance(lo, GaussianRational) and lo == sign * n
    raise_ok = m_hi == n + 1 and isinstance(hi, GaussianRational) and hi == sign * (n + 1)
    return LadderCheck(half, n, lo if isinstance(lo, GaussianRational) else None,
                       hi if isinstance(hi, GaussianRational) else None, lower_ok, raise_ok)


def evaluate(half: EigenfunctionHalf, x, freq: float = 1.0):
    """psi(sqrt(freq) x) freq^(1/4), normalisation and Gaussian phase included."""
    if not freq > 0:
        raise ValueError("freq must be positive")
    y = np.sqrt(freq) * np.asarray(x, dtype=float)
    phase = np.exp(0.5j * half.gaussian_sign * y * y)
    return half.norm_meta.value() * half.poly(y) * phase * freq ** 0.25


def density(n: int, x, freq: float = 1.0, order: str = "rl"):
    """rho_rl = psi_r,n conj(psi_l,n); ``order="lr"`` gives psi_l,n conj(psi_r,n).

    The two Gaussian factors combine to exp(-i freq x^2) (or its conjugate),
    so |rho_0| = freq^(1/2)/sqrt(pi) is constant in x.
    """
    r = evaluate(generate_polynomial(Half.KET, n), x, freq)
    l = evaluate(generate_polynomial(Half.BRA, n), x, freq)
    if order == "rl":
        return r * np.conj(l)
    if order == "lr":
        return l * np.conj(r)
    raise ValueError("order must be 'rl' or 'lr'")
