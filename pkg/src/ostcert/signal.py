"""Sparse signals with uniformly random support, and their figures of merit."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ostcert._seeding import rng_for
from ostcert.errors import ValidationError

NORM_TOL = 1e-9
VALUE_MODELS = ("equal", "equal-random-sign", "given")


@dataclass(frozen=True, eq=False)
class SparseSignal:
    """A unit-norm k-sparse vector of length ``dim``.

    ``support`` is an ordered tuple of distinct 0-based indices and
    ``values[j]`` is the entry at ``support[j]``.
    """

    dim: int
    support: tuple
    values: np.ndarray

    def __post_init__(self):
        support = tuple(int(i) for i in self.support)
        values = np.array(self.values, dtype=np.complex128).reshape(-1)
        k = len(support)
        if not 1 <= k <= self.dim:
            raise ValidationError(f"support size {k} outside [1, {self.dim}]")
        if len(set(support)) != k:
            raise ValidationError("support indices must be distinct")
        if min(support) < 0 or max(support) >= self.dim:
            raise ValidationError(f"support index out of range [0, {self.dim})")
        if values.shape[0] != k:
            raise ValidationError(f"{values.shape[0]} values for a support of size {k}")
        if np.any(values == 0):
            raise ValidationError("signal values must be nonzero")
        if abs(np.linalg.norm(values) - 1.0) > NORM_TOL:
            raise ValidationError("signal values must have unit Euclidean norm")
        values.flags.writeable = False
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "values", values)

    @property
    def k(self) -> int:
        return len(self.support)

    @classmethod
    def from_values(cls, dim, support, values) -> "SparseSignal":
        """Build from arbitrary nonzero values, rescaled to unit norm."""
        v = np.array(values, dtype=np.complex128).reshape(-1)
        if np.any(v == 0):
            raise ValidationError("signal values must be nonzero")
        return cls(int(dim), tuple(support), v / np.linalg.norm(v))

    def dense(self) -> np.ndarray:
        x = np.zeros(self.dim, dtype=np.complex128)
        x[list(self.support)] = self.values
        return x


def gen_signal(C: int, k: int, value_model: str = "equal", seed: int = 0, values=None) -> SparseSignal:
    """Draw a uniformly random ordered k-subset and fill it per ``value_model``.

    ``given`` needs ``values`` (length k, nonzero); they are renormalized.
    """
    if not 1 <= k <= C:
        raise ValidationError(f"k={k} outside [1, C={C}]")
    if value_model not in VALUE_MODELS:
        raise ValidationError(f"unknown value model {value_model!r}")
    rng = rng_for(seed)
    support = tuple(int(i) for i in rng.permutation(int(C))[: int(k)])
    if value_model == "equal":
        vals = np.full(k, 1.0 / np.sqrt(k))
    elif value_model == "equal-random-sign":
        vals = (rng.integers(0, 2, size=k) * 2 - 1) / np.sqrt(k)
    else:
        if values is None:
            raise ValidationError("value model 'given' needs values")
        vals = np.asarray(values, dtype=np.complex128).reshape(-1)
        if vals.shape[0] != k:
            raise ValidationError(f"{vals.shape[0]} given values for k={k}")
    return SparseSignal.from_values(C, support, vals)


def alpha_min(s: SparseSignal) -> float:
    return float(np.abs(s.values).min())


def mar(s: SparseSignal) -> float:
    """Minimum-to-average ratio k * alpha_min^2, in (0, 1]."""
    return s.k * alpha_min(s) ** 2


def snr_min(s: SparseSignal, sigma2: float, N: int) -> float:
    """alpha_min^2 / (E||eta||^2 / k) with E||eta||^2 = N * sigma2."""
    if not sigma2 > 0:
        raise ValidationError(f"sigma2 must be positive, got {sigma2!r}")
    return alpha_min(s) ** 2 * s.k / (N * sigma2)
