"""Statistical orthogonality condition (StOC): per-draw checks, Monte Carlo
failure-rate estimates, and the closed-form coherence bounds."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from ostcert._seeding import derive_seed, rng_for
from ostcert.design import DesignMatrix
from ostcert.errors import HypothesisError, ValidationError


@dataclass(frozen=True)
class StocVerdict:
    lhs1: float
    lhs2: float
    epsilon_scaled: float
    pass1: bool
    pass2: bool

    @property
    def passed(self) -> bool:
        return self.pass1 and self.pass2


@dataclass(frozen=True)
class StocEstimate:
    delta1_hat: float
    delta2_hat: float
    delta_hat: float
    trials: int

    def to_dict(self) -> dict:
        return asdict(self)


def _check_epsilon(epsilon, allow_large):
    if not epsilon >= 0:
        raise ValidationError(f"epsilon must be >= 0, got {epsilon!r}")
    if epsilon >= 1 and not allow_large:
        raise ValidationError(
            f"epsilon must lie in [0, 1), got {epsilon!r} (pass allow_large_epsilon=True to override)"
        )


def _lhs(a: np.ndarray, support, z: np.ndarray):
    idx = list(support)
    sub = a[:, idx]
    g = sub.conj().T @ sub
    np.fill_diagonal(g, 0.0)
    lhs1 = float(np.abs(g @ z).max())
    corr = np.abs(a.conj().T @ (sub @ z))
    corr[idx] = 0.0
    lhs2 = float(corr.max()) if a.shape[1] > len(idx) else 0.0
    return lhs1, lhs2


def stoc_check(phi: DesignMatrix, support, z, epsilon: float, *, allow_large_epsilon: bool = False) -> StocVerdict:
    """Evaluate both StOC inequalities for one support draw.

    lhs1 = ||(Phi_S^H Phi_S - I) z||_inf and lhs2 = ||Phi_{S^c}^H Phi_S z||_inf,
    each compared (non-strictly) against epsilon * ||z||_2. The on-support
    Gram has its diagonal zeroed rather than subtracting I, so k = 1 gives
    lhs1 = 0 exactly.
    """
    _check_epsilon(epsilon, allow_large_epsilon)
    support = tuple(int(i) for i in support)
    z = np.asarray(z, dtype=np.complex128).reshape(-1)
    if len(support) != z.shape[0]:
        raise ValidationError(f"z has length {z.shape[0]}, support has {len(support)}")
    if len(set(support)) != len(support) or min(support) < 0 or max(support) >= phi.cols:
        raise ValidationError("support must be distinct indices in range")
    lhs1, lhs2 = _lhs(phi.entries, support, z)
    bound = float(epsilon * np.linalg.norm(z))
    return StocVerdict(lhs1, lhs2, bound, lhs1 <= bound, lhs2 <= bound)


def random_support(C: int, k: int, seed: int) -> tuple:
    """Uniformly random ordered k-subset as a permutation prefix."""
    return tuple(int(i) for i in rng_for(seed).permutation(C)[:k])


def stoc_delta_estimate(phi: DesignMatrix, k: int, z, epsilon: float, trials: int, seed: int,
                        *, allow_large_epsilon: bool = False) -> StocEstimate:
    """Monte Carlo failure frequencies of StOC-1, StOC-2 and their union.

    ``z`` stays fixed while the support is redrawn each trial.
    """
    if k > phi.cols or k < 1:
        raise ValidationError(f"k={k} outside [1, C={phi.cols}]")
    if trials < 1:
        raise ValidationError("trials must be >= 1")
    _check_epsilon(epsilon, allow_large_epsilon)
    z = np.asarray(z, dtype=np.complex128).reshape(-1)
    if z.shape[0] != k:
        raise ValidationError(f"z has length {z.shape[0]}, expected k={k}")
    bound = float(epsilon * np.linalg.norm(z))
    a = phi.entries
    f1 = f2 = fu = 0
    for t in range(trials):
        lhs1, lhs2 = _lhs(a, random_support(phi.cols, k, derive_seed(seed, t)), z)
        b1, b2 = lhs1 > bound, lhs2 > bound
        f1 += b1
        f2 += b2
        fu += b1 or b2
    return StocEstimate(f1 / trials, f2 / trials, fu / trials, int(trials))


def lemma_hypothesis(k: int, epsilon: float, nu: float, C: int) -> bool:
    """k <= min{epsilon^2 / (4 nu^2), C/2}."""
    cap = math.inf if nu == 0 else epsilon**2 / (4.0 * nu**2)
    return k <= min(cap, C / 2.0)


def _need_mu(mu):
    if not mu > 0:
        raise ValidationError(f"mu must be > 0, got {mu!r}")


def lemma2_bound(k: int, epsilon: float, mu: float) -> float:
    """4k exp(-eps^2 / (576 mu^2)) on the StOC-1 failure probability. Unclamped."""
    _need_mu(mu)
    return 4.0 * k * math.exp(-(epsilon**2) / (576.0 * mu**2))


def lemma3_bound(C: int, epsilon: float, mu: float) -> float:
    """4C exp(-eps^2 / (256 mu^2)) on the StOC-2 failure probability. Unclamped."""
    _need_mu(mu)
    return 4.0 * C * math.exp(-(epsilon**2) / (256.0 * mu**2))


def lemma1_failure_bound(delta: float, C: int) -> float:
    """delta + 2 / (sqrt(2 pi ln C) C)."""
    if not 0 <= delta <= 1:
        raise ValidationError(f"delta must lie in [0, 1], got {delta!r}")
    if C < 2:
        raise ValidationError(f"C must be >= 2, got {C}")
    return delta + 2.0 / (math.sqrt(2.0 * math.pi * math.log(C)) * C)


def noise_tail_bound(C: int) -> float:
    return lemma1_failure_bound(0.0, C)


def stoc_delta_from_coherence(k: int, epsilon: float, mu: float, nu: float, C: int) -> float:
    """delta = 8C exp(-eps^2 / (576 mu^2)), valid for eps in [2 sqrt(k) nu, 1), k <= C/2."""
    _need_mu(mu)
    lo = 2.0 * math.sqrt(k) * nu
    if not lo <= epsilon < 1:
        raise HypothesisError(f"epsilon={epsilon!r} outside [2 sqrt(k) nu, 1) = [{lo!r}, 1)")
    if k > C / 2:
        raise HypothesisError(f"k={k} exceeds C/2={C / 2}")
    return 8.0 * C * math.exp(-(epsilon**2) / (576.0 * mu**2))
