"""Physical parameters, the effective frequency and the regime it implies."""
import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import RegimeError


class Regime(enum.Enum):
    BELOW_EP = "BelowEP"
    AT_EP = "AtEP"
    ABOVE_EP = "AboveEP"


@dataclass(frozen=True)
class ModelParams:
    """Slope frequency ``omega``, coupling ``g``, Fock truncation and tolerance."""

    omega: float = 1.0
    g: float = 0.0
    truncation: int = 128
    tol: float = 1e-3

    def __post_init__(self):
        if not (math.isfinite(self.omega) and self.omega > 0):
            raise ValueError(f"omega must be positive and finite, got {self.omega!r}")
        if not (math.isfinite(self.g) and self.g >= 0):
            raise ValueError(f"g must be non-negative and finite, got {self.g!r}")
        if isinstance(self.truncation, bool) or int(self.truncation) != self.truncation:
            raise ValueError(f"truncation must be an integer, got {self.truncation!r}")
        if self.truncation < 4:
            raise ValueError(f"truncation must be at least 4, got {self.truncation}")
        if not (math.isfinite(self.tol) and self.tol > 0):
            raise ValueError(f"tol must be positive, got {self.tol!r}")
        object.__setattr__(self, "truncation", int(self.truncation))

    def with_(self, **changes):
        fields = dict(omega=self.omega, g=self.g, truncation=self.truncation, tol=self.tol)
        fields.update(changes)
        return ModelParams(**fields)


@dataclass(frozen=True)
class EffectiveFrequency:
    regime: Regime
    value: float


def regime(params: ModelParams) -> Regime:
    if abs(params.omega - params.g) <= params.tol * params.omega:
        return Regime.AT_EP
    return Regime.BELOW_EP if params.g < params.omega else Regime.ABOVE_EP


def effective_frequency(params: ModelParams) -> EffectiveFrequency:
    """Return sqrt(|omega^2 - g^2|) tagged with its regime.

    Inside the EP window the value is reported as exactly 0.
    """
    r = regime(params)
    if r is Regime.AT_EP:
        return EffectiveFrequency(r, 0.0)
    w, g = params.omega, params.g
    # (w-g)(w+g) avoids cancellation near the EP
    return EffectiveFrequency(r, math.sqrt(abs((w - g) * (w + g))))


def ep_coupling(params: ModelParams) -> float:
    """Coupling at the exceptional point, equal to omega."""
    return params.omega


def eta_from_g(params: ModelParams) -> float:
    """Positive squeezing parameter with tanh(eta) = g / omega."""
    if params.g >= params.omega:
        raise RegimeError(
            f"no real eta at g={params.g} >= omega={params.omega}; "
            "the transformation exists only below the exceptional point"
        )
    return math.atanh(params.g / params.omega)


def potential_profile(params: ModelParams, xs, convention: str = "frequency"):
    """Potential V(x) of the transformed Hamiltonian.

    ``convention="frequency"`` uses V = -f x^2/2 below the EP and +f x^2/2
    above it, f being the effective frequency.  ``"squared"`` uses f^2.
    Returns a list of ``(x, V)`` pairs.
    """
    xs = np.asarray(xs, dtype=float)
    if not np.all(np.isfinite(xs)):
        raise ValueError("xs must be finite")
    ef = effective_frequency(params)
    if convention == "frequency":
        k = ef.value
    elif convention == "squared":
        k = ef.value ** 2
    else:
        raise ValueError(f"unknown convention {convention!r}")
    sign = {Regime.BELOW_EP: -1.0, Regime.AT_EP: 0.0, Regime.ABOVE_EP: 1.0}[ef.regime]
    vs = sign * 0.5 * k * xs ** 2
    return [(float(x), float(v) + 0.0) for x, v in zip(xs, vs)]
