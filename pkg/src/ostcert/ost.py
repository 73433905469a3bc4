"""Measurement model f = Phi alpha + eta and one-step thresholding."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ostcert._seeding import rng_for
from ostcert.design import DesignMatrix
from ostcert.errors import DimensionError, ValidationError, ZeroThresholdError
from ostcert.signal import SparseSignal


@dataclass(frozen=True, eq=False)
class Measurement:
    f: np.ndarray
    sigma2: float
    phi: Optional[DesignMatrix] = None
    signal: Optional[SparseSignal] = None
    noise: Optional[np.ndarray] = None

    def __post_init__(self):
        f = np.array(self.f, dtype=np.complex128).reshape(-1)
        f.flags.writeable = False
        object.__setattr__(self, "f", f)
        if self.phi is not None and f.shape[0] != self.phi.rows:
            raise DimensionError(f"measurement length {f.shape[0]} != rows {self.phi.rows}")


@dataclass(frozen=True, eq=False)
class ModelEstimate:
    selected: tuple
    y: np.ndarray
    lam: float

    def matches(self, support) -> bool:
        return set(self.selected) == set(support)


def measure(phi: DesignMatrix, s: SparseSignal, sigma2: float, seed: int) -> Measurement:
    """f = Phi alpha + eta with eta ~ CN(0, sigma2 I).

    Real and imaginary noise parts are each N(0, sigma2/2).
    """
    if s.dim != phi.cols:
        raise DimensionError(f"signal dimension {s.dim} != design columns {phi.cols}")
    if sigma2 < 0:
        raise ValidationError(f"sigma2 must be >= 0, got {sigma2!r}")
    clean = phi.entries[:, list(s.support)] @ s.values
    if sigma2 == 0:
        noise = np.zeros(phi.rows, dtype=np.complex128)
    else:
        rng = rng_for(seed)
        scale = math.sqrt(sigma2 / 2.0)
        noise = scale * (rng.standard_normal(phi.rows) + 1j * rng.standard_normal(phi.rows))
    return Measurement(clean + noise, float(sigma2), phi, s, noise)


def ost(phi: DesignMatrix, f, lam: float) -> ModelEstimate:
    """Keep indices with |(Phi^H f)_i| strictly above ``lam``."""
    if not lam > 0:
        raise ValidationError(f"threshold must be > 0, got {lam!r}")
    vec = f.f if isinstance(f, Measurement) else np.asarray(f, dtype=np.complex128).reshape(-1)
    if vec.shape[0] != phi.rows:
        raise DimensionError(f"measurement length {vec.shape[0]} != rows {phi.rows}")
    y = phi.entries.conj().T @ vec
    selected = tuple(int(i) for i in np.flatnonzero(np.abs(y) > lam))
    return ModelEstimate(selected, y, float(lam))


def threshold_theorem(mu: float, sigma2: float, C: int) -> float:
    """4 * max{12 mu sqrt(2 ln C), sqrt(sigma2 ln C)}."""
    if mu < 0 or sigma2 < 0:
        raise ValidationError("mu and sigma2 must be non-negative")
    if C < 2:
        raise ValidationError(f"C must be >= 2, got {C}")
    L = math.log(C)
    lam = 4.0 * max(12.0 * mu * math.sqrt(2.0 * L), math.sqrt(sigma2 * L))
    if lam <= 0:
        raise ZeroThresholdError("mu and sigma2 both zero give a zero threshold")
    return lam


def threshold_lemma(epsilon: float, sigma2: float, C: int) -> float:
    """2 * max{epsilon, 2 sqrt(sigma2 ln C)}."""
    if epsilon < 0 or sigma2 < 0:
        raise ValidationError("epsilon and sigma2 must be non-negative")
    if C < 2:
        raise ValidationError(f"C must be >= 2, got {C}")
    lam = 2.0 * max(epsilon, 2.0 * math.sqrt(sigma2 * math.log(C)))
    if lam <= 0:
        raise ZeroThresholdError("epsilon and sigma2 both zero give a zero threshold")
    return lam


def noise_radius(sigma2: float, C: int) -> float:
    """2 sqrt(sigma2 ln C): the high-probability bound on ||Phi^H eta||_inf."""
    return 2.0 * math.sqrt(sigma2 * math.log(C))
