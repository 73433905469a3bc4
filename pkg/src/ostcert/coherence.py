"""Worst-case and average coherence, and the coherence-property certificate."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from ostcert.design import DesignMatrix, GramDeviation, gram_deviation


@dataclass(frozen=True)
class CoherenceReport:
    mu: float
    nu: float
    cp1_bound: float
    cp2_bound: float
    cp1_pass: bool
    cp2_pass: bool
    overall_pass: bool

    def to_dict(self) -> dict:
        return asdict(self)


def _offdiag_abs(dev: GramDeviation) -> np.ndarray:
    mags = np.abs(dev.values)
    np.fill_diagonal(mags, 0.0)
    return mags


def _mu_from(dev: GramDeviation) -> float:
    return float(_offdiag_abs(dev).max())


def _nu_from(dev: GramDeviation) -> float:
    c = dev.values.shape[0]
    v = np.array(dev.values)
    np.fill_diagonal(v, 0.0)
    return float(np.abs(v.sum(axis=1)).max() / (c - 1))


def worst_case_coherence(phi: DesignMatrix) -> float:
    """Largest |<phi_i, phi_j>| over distinct column pairs."""
    return _mu_from(gram_deviation(phi))


def average_coherence(phi: DesignMatrix) -> float:
    """max_i |sum_{j != i} <phi_i, phi_j>| / (C - 1).

    The modulus is taken of the complex sum, not summed over moduli.
    """
    return _nu_from(gram_deviation(phi))


def cp1_bound(C: int) -> float:
    return 1.0 / math.sqrt(10.0 * math.log(C))


def cp2_bound(mu: float, N: int) -> float:
    return 12.0 * mu / math.sqrt(N)


def coherence_report(mu: float, nu: float, N: int, C: int) -> CoherenceReport:
    """Certificate from already-known coherences (non-strict comparisons)."""
    b1 = cp1_bound(C)
    b2 = cp2_bound(mu, N)
    p1 = bool(mu <= b1)
    p2 = bool(nu <= b2)
    return CoherenceReport(float(mu), float(nu), b1, b2, p1, p2, p1 and p2)


def check_coherence_property(phi: DesignMatrix) -> CoherenceReport:
    dev = gram_deviation(phi)
    return coherence_report(_mu_from(dev), _nu_from(dev), phi.rows, phi.cols)
