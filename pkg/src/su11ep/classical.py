"""Complex classical dynamics of H = omega (p^2 - x^2)/2 - i g x p.

Hamilton's equations are taken as a holomorphic flow on C^2:

    dx/dt =  omega p - i g x,     dp/dt = omega x + i g p.

The linear canonical map x = X cosh(eta/2) - i P sinh(eta/2),
p = i X sinh(eta/2) + P cosh(eta/2) with tanh(eta) = g/omega turns H into
Gamma_I (P^2 - X^2)/2.  Because the map is linear and symplectic,
p dx - P dX = d[(x p - X P)/2], which gives the gauge function

    F = (omega/Gamma_I - 1) X P / 2 + (i g / (4 Gamma_I)) (X^2 - P^2).
"""
import enum
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from . import _kernels
from .errors import FrameError, RegimeError, StepError
from .model import ModelParams, Regime, effective_frequency, eta_from_g


class Frame(enum.Enum):
    ORIGINAL = "Original"
    TRANSFORMED = "Transformed"


@dataclass(frozen=True)
class PhasePoint:
    q: complex
    mom: complex
    t: float = 0.0
    frame: Frame = Frame.ORIGINAL

    def __post_init__(self):
        object.__setattr__(self, "q", complex(self.q))
        object.__setattr__(self, "mom", complex(self.mom))
        if not (np.isfinite(self.q) and np.isfinite(self.mom)):
            raise ValueError("phase-space components must be finite")


@dataclass(frozen=True)
class Trajectory:
    """Uniformly sampled path; arrays are read-only."""

    t: np.ndarray
    q: np.ndarray
    mom: np.ndarray
    dt: float
    frame: Frame
    hamiltonian_values: np.ndarray

    def __post_init__(self):
        for name in ("t", "q", "mom", "hamiltonian_values"):
            getattr(self, name).flags.writeable = False

    @property
    def samples(self) -> Tuple[PhasePoint, ...]:
        return tuple(PhasePoint(q, p, t, self.frame) for t, q, p in zip(self.t, self.q, self.mom))

    def __len__(self):
        return len(self.t)

    @property
    def energy_drift(self) -> float:
        return float(np.max(np.abs(self.hamiltonian_values - self.hamiltonian_values[0])))


@dataclass(frozen=True)
class GaugeCheckRecord:
    """Pointwise gauge check.  ``lagrangian_residual`` is
    |(L - L') - dF/dt| evaluated with the exact flow velocities at ``point``.
    """

    point: PhasePoint
    lhs: complex
    rhs: complex
    f_value: complex
    lagrangian_residual: float

    @property
    def residual(self) -> float:
        return abs(self.lhs - self.rhs)


def hamiltonian_value(x, p, params: ModelParams):
    return params.omega * (p * p - x * x) / 2 - 1j * params.g * x * p


def _gamma_i(params):
    ef = effective_frequency(params)
    if ef.regime is not Regime.BELOW_EP:
        raise RegimeError("the transformed frame exists only below the exceptional point")
    return ef.value


def transformed_hamiltonian_value(X, P, params: ModelParams):
    return _gamma_i(params) * (P * P - X * X) / 2


def _generator(params, frame):
    if frame is Frame.ORIGINAL:
        return np.array([[-1j * params.g, params.omega], [params.omega, 1j * params.g]])
    gi = _gamma_i(params)
    return np.array([[0.0, gi], [gi, 0.0]], dtype=complex)


def equations_of_motion(state: PhasePoint, params: ModelParams):
    """(dx/dt, dp/dt) in the original frame."""
    if state.frame is not Frame.ORIGINAL:
        raise FrameError("equations_of_motion expects an Original-frame point")
    x, p = state.q, state.mom
    return params.omega * p - 1j * params.g * x, params.omega * x + 1j * params.g * p


def transformed_equations_of_motion(state: PhasePoint, params: ModelParams):
    """(dX/dt, dP/dt) = Gamma_I (P, X)."""
    if state.frame is not Frame.TRANSFORMED:
        raise FrameError("expected a Transformed-frame point")
    gi = _gamma_i(params)
    return gi * state.mom, gi * state.q


def integrate(initial: PhasePoint, dt: float, steps: int, params: ModelParams) -> Trajectory:
    """Classical RK4 with fixed step in the frame of ``initial``."""
    if not (dt > 0 and math.isfinite(dt)):
        raise ValueError("dt must be positive and finite")
    if steps < 1:
        raise ValueError("steps must be positive")
    a = _generator(params, initial.frame)
    y = _kernels.rk4_linear(a, np.array([initial.q, initial.mom]), dt, steps)
    if not np.all(np.isfinite(y)):
        raise StepError("trajectory left the finite range")
    t = initial.t + dt * np.arange(steps + 1)
    q, mom = y[:, 0].copy(), y[:, 1].copy()
    if initial.frame is Frame.ORIGINAL:
        h = hamiltonian_value(q, mom, params)
    else:
        h = transformed_hamiltonian_value(q, mom, params)
    return Trajectory(t, q, mom, float(dt), initial.frame, np.asarray(h, dtype=complex))


def free_orbit(v0: float, omega: float, t):
    """x(t) = (v0/omega) sinh(omega t) for x(0) = 0, g = 0."""
    return v0 / omega * np.sinh(omega * np.asarray(t))


def canonical_map(X, P, eta: float):
    """(X, P) -> (x, p); its 2x2 matrix has unit determinant for every eta."""
    c, s = math.cosh(eta / 2), math.sinh(eta / 2)
    return X * c - 1j * P * s, 1j * X * s + P * c


def inverse_canonical_map(x, p, eta: float):
    return canonical_map(x, p, -eta)


def canonical_matrix(eta: float) -> np.ndarray:
    c, s = math.cosh(eta / 2), math.sinh(eta / 2)
    return np.array([[c, -1j * s], [1j * s, c]])


def gauge_function(X, P, params: ModelParams, form: str = "derived"):
    """Gauge function F(X, P) with L - L' = dF/dt.

    ``form="derived"`` is (xp - XP)/2 written in (X, P).  ``form="printed"``
    evaluates the alternative ((i/2)(P^2 - X^2) - XP) g/(2 Gamma_I) + XP/2,
    which does not satisfy the identity and is kept for comparison.
    """
    gi = _gamma_i(params)
    if form == "derived":
        return (params.omega / gi - 1) * X * P / 2 + 1j * params.g / (4 * gi) * (X * X - P * P)
    if form == "printed":
        return 0.5 * (0.5j * (P * P - X * X) - X * P) * params.g / gi + X * P / 2
    raise ValueError("form must be 'derived' or 'printed'")


def _gauge_terms(X, P, params, eta, form):
    """(L - L') and dF/dt from exact transformed-frame velocities."""
    gi = _gamma_i(params)
    Xd, Pd = gi * P, gi * X
    x, p = canonical_map(X, P, eta)
    xd, _ = canonical_map(Xd, Pd, eta)
    lag = xd * p - hamiltonian_value(x, p, params)
    lag_t = Xd * P - gi * (P * P - X * X) / 2
    # dF/dt by the chain rule; F is quadratic so its gradient is exact
    r = params.g / gi
    if form == "derived":
        dfdX = (params.omega / gi - 1) * P / 2 + 0.5j * r * X
        dfdP = (params.omega / gi - 1) * X / 2 - 0.5j * r * P
    else:
        dfdX = -0.5j * r * X + (1 - r) * P / 2
        dfdP = 0.5j * r * P + (1 - r) * X / 2
    return lag - lag_t, dfdX * Xd + dfdP * Pd


def gauge_equivalence(X, P, params: ModelParams, eta: Optional[float] = None,
                      form: str = "derived") -> GaugeCheckRecord:
    """Compare H(x(X,P), p(X,P)) with Gamma_I (P^2 - X^2)/2.

    ``eta`` defaults to the value fixed by tanh(eta) = g/omega; pass a
    perturbed value to see the identity break.
    """
    gi = _gamma_i(params)
    if eta is None:
        eta = eta_from_g(params)
    x, p = canonical_map(X, P, eta)
    lhs = complex(hamiltonian_value(x, p, params))
    rhs = complex(gi * (P * P - X * X) / 2)
    diff, dfdt = _gauge_terms(X, P, params, eta, form)
    return GaugeCheckRecord(PhasePoint(X, P, 0.0, Frame.TRANSFORMED), lhs, rhs,
                            complex(gauge_function(X, P, params, form)),
                            float(abs(diff - dfdt)))


def lagrangian_gauge_residual(trajectory: Trajectory, params: ModelParams,
                              form: str = "derived") -> float:
    """max |(L - L') - dF/dt| over interior samples.

    L - L' uses the flow velocities at each sample; dF/dt is the central
    difference of F along the trajectory, so the result is O(dt^2).
    """
    if trajectory.frame is not Frame.TRANSFORMED:
        raise FrameError("lagrangian_gauge_residual expects a Transformed-frame trajectory")
    if len(trajectory) < 3:
        raise StepError("need at least three samples for central differences")
    X, P = trajectory.q, trajectory.mom
    eta = eta_from_g(params)
    diff, _ = _gauge_terms(X, P, params, eta, form)
    f = gauge_function(X, P, params, form)
    dfdt = (f[2:] - f[:-2]) / (2 * trajectory.dt)
    res = np.abs(diff[1:-1] - dfdt)
    if not np.all(np.isfinite(res)):
        raise StepError("non-finite gauge residual")
    return float(res.max())
