"""Spectra, dual eigenfunctions and the exceptional point of the SU(1,1)
inverted oscillator with a non-Hermitian coupling."""
from ._accel import backend
from .errors import (
    BasisError, ConvergenceError, DimensionError, DomainWarning, FrameError, RegimeError,
    StepError, Su11Error,
)
from .model import EffectiveFrequency, ModelParams, Regime, effective_frequency, eta_from_g

__version__ = "0.1.0"

__all__ = [
    "BasisError", "ConvergenceError", "DimensionError", "DomainWarning", "EffectiveFrequency",
    "FrameError", "ModelParams", "Regime", "RegimeError", "StepError", "Su11Error", "backend",
    "effective_frequency", "eta_from_g",
]
