import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ostcert import (
    average_coherence,
    check_coherence_property,
    from_dense,
    gram_deviation,
    worst_case_coherence,
)
from ostcert.coherence import coherence_report

from oracles import brute_mu, brute_nu, random_unit_columns

S = 1 / math.sqrt(2)
THREE_COLS = [[1, 0, S], [0, 1, S]]


def test_identity_zero():
    phi = from_dense(np.eye(5))
    assert worst_case_coherence(phi) == 0.0
    assert average_coherence(phi) == 0.0


def test_three_columns_hand_computed():
    phi = from_dense(THREE_COLS)
    assert worst_case_coherence(phi) == pytest.approx(0.7071067811865476, abs=1e-15)
    # row sums {1/sqrt2, 1/sqrt2, sqrt2} over C-1 = 2
    assert average_coherence(phi) == pytest.approx(0.7071067811865476, abs=1e-15)


def test_duplicated_column():
    v = np.array([0.6, 0.8])
    phi = from_dense(np.column_stack([v, v, [1, 0]]))
    assert worst_case_coherence(phi) == pytest.approx(1.0)


def test_two_columns_half():
    phi = from_dense([[1, 0.5], [0, math.sqrt(0.75)]])
    assert average_coherence(phi) == pytest.approx(0.5, abs=1e-15)


def test_average_uses_modulus_of_sum():
    # inner products +1/sqrt2 and -1/sqrt2 from column 0 cancel in nu
    phi = from_dense([[0, S, S], [1, S, -S]])
    assert worst_case_coherence(phi) == pytest.approx(S)
    assert average_coherence(phi) == pytest.approx(S / 2)
    assert brute_nu(phi.entries) == pytest.approx(S / 2)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.integers(2, 9), st.integers(0, 2**32 - 1))
def test_matches_brute_force(N, C, seed):
    a = random_unit_columns(np.random.default_rng(seed), N, C)
    phi = from_dense(a)
    assert abs(worst_case_coherence(phi) - brute_mu(a)) <= 1e-12
    assert abs(average_coherence(phi) - brute_nu(a)) <= 1e-12


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 8), st.integers(2, 12), st.integers(0, 2**32 - 1))
def test_invariants(N, C, seed):
    rng = np.random.default_rng(seed)
    a = random_unit_columns(rng, N, C)
    phi = from_dense(a)
    mu, nu = worst_case_coherence(phi), average_coherence(phi)
    assert 0 <= nu <= mu + 1e-15 <= 1 + 1e-9
    dev = gram_deviation(phi)
    assert abs(mu - dev.max_abs()) <= 1e-12
    assert abs((C - 1) * nu - np.abs(dev.row_sums()).max()) <= 1e-12

    perm = rng.permutation(C)
    pphi = from_dense(a[:, perm])
    assert worst_case_coherence(pphi) == pytest.approx(mu, abs=1e-14)
    assert average_coherence(pphi) == pytest.approx(nu, abs=1e-14)

    phases = np.exp(1j * rng.uniform(0, 2 * np.pi, C))
    assert worst_case_coherence(from_dense(a * phases)) == pytest.approx(mu, abs=1e-14)


def test_report_identity_large():
    rep = check_coherence_property(from_dense(np.eye(1024)))
    assert (rep.mu, rep.nu) == (0.0, 0.0)
    assert rep.overall_pass


def test_cp1_arithmetic():
    rep = coherence_report(0.5, 0.0, N=100, C=math.exp(10))
    assert rep.cp1_bound == pytest.approx(0.1, rel=1e-14)
    assert not rep.cp1_pass
    assert not rep.overall_pass


def test_cp_boundary_is_inclusive():
    C, N = 1024, 64
    b1 = 1 / math.sqrt(10 * math.log(C))
    rep = coherence_report(b1, 12 * b1 / math.sqrt(N), N, C)
    assert rep.cp1_bound == b1
    assert rep.cp1_pass and rep.cp2_pass and rep.overall_pass


def test_overall_is_conjunction():
    for mu, nu in [(0.01, 0.0), (0.01, 0.5), (0.9, 0.0), (0.9, 0.9)]:
        rep = coherence_report(mu, nu, 64, 1024)
        assert rep.overall_pass == (rep.mu <= rep.cp1_bound and rep.nu <= rep.cp2_bound)


def test_report_json_keys():
    d = check_coherence_property(from_dense(np.eye(3))).to_dict()
    assert list(d) == ["mu", "nu", "cp1_bound", "cp2_bound", "cp1_pass", "cp2_pass", "overall_pass"]
