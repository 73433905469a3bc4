import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from ostcert import SparseSignal, ValidationError, alpha_min, gen_signal, mar, snr_min

S2 = 1 / math.sqrt(2)


def test_full_support_equal():
    s = gen_signal(8, 8, "equal", seed=3)
    assert sorted(s.support) == list(range(8))
    assert np.allclose(s.values, 1 / math.sqrt(8))


def test_equal_model_figures():
    s = gen_signal(1024, 10, "equal", seed=0)
    assert mar(s) == pytest.approx(1.0, abs=1e-12)
    assert alpha_min(s) == pytest.approx(0.31622776601683794, abs=1e-15)


def test_random_sign_magnitudes():
    s = gen_signal(50, 7, "equal-random-sign", seed=9)
    assert np.allclose(np.abs(s.values), 1 / math.sqrt(7))
    assert set(np.sign(s.values.real)) <= {-1.0, 1.0}


def test_given_values_renormalized():
    s = gen_signal(10, 2, "given", seed=1, values=[3, 4])
    assert np.allclose(s.values, [0.6, 0.8])


@pytest.mark.parametrize("kwargs", [
    dict(C=5, k=0), dict(C=5, k=6), dict(C=5, k=2, value_model="given", values=[1, 0]),
    dict(C=5, k=2, value_model="given"), dict(C=5, k=2, value_model="bogus"),
])
def test_gen_signal_errors(kwargs):
    with pytest.raises(ValidationError):
        gen_signal(**kwargs)


def test_deterministic():
    a, b = gen_signal(100, 5, "equal-random-sign", 42), gen_signal(100, 5, "equal-random-sign", 42)
    assert a.support == b.support and np.array_equal(a.values, b.values)


def test_signal_invariants_enforced():
    with pytest.raises(ValidationError):
        SparseSignal(4, (0, 0), [S2, S2])
    with pytest.raises(ValidationError):
        SparseSignal(4, (0, 4), [S2, S2])
    with pytest.raises(ValidationError):
        SparseSignal(4, (0, 1), [1.0, 1.0])
    with pytest.raises(ValidationError):
        SparseSignal(4, (0, 1), [1.0, 0.0])


def test_alpha_min_and_mar_examples():
    s = SparseSignal(5, (0, 3), [0.6, 0.8])
    assert alpha_min(s) == 0.6
    assert mar(s) == pytest.approx(0.72, abs=1e-15)
    assert alpha_min(SparseSignal(5, (0, 3), [0.6, -0.8j])) == 0.6


def test_snr_min_arithmetic():
    # alpha_min^2 = 0.1 with k = 10 -> all magnitudes equal sqrt(0.1)
    s = gen_signal(20, 10, "equal", seed=0)
    assert snr_min(s, 0.01, 100) == pytest.approx(1.0, rel=1e-12)
    assert snr_min(s, 0.02, 100) == pytest.approx(0.5, rel=1e-12)
    with pytest.raises(ValidationError):
        snr_min(s, 0.0, 100)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.complex_numbers(min_magnitude=1e-3, max_magnitude=1e3), min_size=1, max_size=12),
       st.floats(1e-4, 10), st.integers(1, 500))
def test_snr_min_equals_snr_times_mar(vals, sigma2, N):
    s = SparseSignal.from_values(20, range(len(vals)), vals)
    assert mar(s) <= 1 + 1e-9
    snr = 1 / (N * sigma2)
    assert snr_min(s, sigma2, N) == pytest.approx(snr * mar(s), rel=1e-12)


def test_support_marginals_uniform():
    C, k, T = 16, 4, 100_000
    counts = np.zeros(C)
    for t in range(T):
        counts[list(gen_signal(C, k, "equal", seed=t).support)] += 1
    assert np.all(np.abs(counts / T - k / C) <= 0.01)
    # each draw contributes k hits; marginals are uniform
    assert stats.chisquare(counts).pvalue > 1e-3


def test_ordered_positions_uniform():
    # first support slot is uniform over all indices (permutation prefix)
    C, T = 8, 20_000
    first = np.bincount([gen_signal(C, 3, "equal", seed=t).support[0] for t in range(T)], minlength=C)
    assert stats.chisquare(first).pvalue > 1e-3
