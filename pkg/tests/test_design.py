import math

import numpy as np
import pytest

from ostcert import (
    DegenerateColumnError,
    DimensionError,
    ValidationError,
    from_dense,
    gen_gaussian,
    gen_rademacher,
    gram_deviation,
    read_matrix_file,
    worst_case_coherence,
    write_matrix_file,
)
from ostcert.design import parse_complex, parse_matrix_text

from oracles import inner, random_unit_columns


def test_gaussian_tiny_is_signs():
    phi = gen_gaussian(1, 2, seed=11)
    assert np.allclose(np.abs(phi.entries), 1.0)
    assert worst_case_coherence(phi) == pytest.approx(1.0)


def test_gaussian_deterministic():
    a = gen_gaussian(256, 1024, seed=7)
    b = gen_gaussian(256, 1024, seed=7)
    assert np.array_equal(a.entries, b.entries)
    assert not np.array_equal(a.entries, gen_gaussian(256, 1024, seed=8).entries)


def test_gaussian_is_real_with_unit_columns():
    phi = gen_gaussian(16, 40, seed=2)
    assert phi.is_real()
    assert np.allclose(np.linalg.norm(phi.entries, axis=0), 1.0, atol=1e-12)


def test_gaussian_coherence_corridor():
    N, C = 256, 1024
    mid = math.sqrt(2 * math.log(C) / N)
    mu = worst_case_coherence(gen_gaussian(N, C, seed=7))
    assert 0.5 * mid <= mu <= 2 * mid


@pytest.mark.parametrize("gen", [gen_gaussian, gen_rademacher])
def test_generators_reject_single_column(gen):
    with pytest.raises(DimensionError):
        gen(4, 1, seed=0)


def test_rademacher_exact_unit_norm():
    phi = gen_rademacher(4, 8, seed=1)
    assert np.all(np.linalg.norm(phi.entries, axis=0) == 1.0)
    assert set(np.unique(phi.entries.real)) <= {-0.5, 0.5}


def test_rademacher_n1_fully_coherent():
    assert worst_case_coherence(gen_rademacher(1, 2, seed=5)) == pytest.approx(1.0)


def test_rademacher_inner_products_on_lattice():
    N = 64
    dev = gram_deviation(gen_rademacher(N, 256, seed=3)).values
    step = 2.0 / N
    q = np.abs(dev) / step
    assert np.allclose(q, np.round(q), atol=1e-12 / step)


def test_from_dense_identity():
    phi = from_dense(np.eye(3))
    assert worst_case_coherence(phi) == 0.0


def test_from_dense_zero_column():
    a = np.eye(3)
    a[:, 1] = 0
    with pytest.raises(DegenerateColumnError):
        from_dense(a, normalize=True)


def test_from_dense_normalizes():
    phi = from_dense([[2, 0], [0, 5]], normalize=True)
    assert np.array_equal(phi.entries, np.eye(2))


def test_from_dense_rejects_unnormalized():
    with pytest.raises(ValidationError):
        from_dense([[2, 0], [0, 1]])
    # within tolerance is accepted
    from_dense(np.eye(2) * (1 + 1e-11))


def test_entries_read_only():
    phi = gen_gaussian(3, 4, seed=0)
    with pytest.raises(ValueError):
        phi.entries[0, 0] = 1.0


def test_gram_deviation_identity():
    assert np.array_equal(gram_deviation(from_dense(np.eye(3))).values, np.zeros((3, 3)))


def test_gram_deviation_hand_computed():
    s = 1 / math.sqrt(2)
    phi = from_dense([[1, 0, s], [0, 1, s]])
    dev = gram_deviation(phi).values
    expected = np.array([[0, 0, s], [0, 0, s], [s, s, 0]])
    assert np.allclose(dev, expected, atol=1e-15)


def test_gram_deviation_hermitian_and_matches_loop():
    rng = np.random.default_rng(0)
    a = random_unit_columns(rng, 5, 7)
    dev = gram_deviation(from_dense(a)).values
    assert np.array_equal(dev, dev.conj().T)
    assert np.abs(np.diag(dev)).max() <= 1e-9
    for i in range(7):
        for j in range(7):
            if i != j:
                assert abs(dev[i, j] - inner(a[:, i], a[:, j])) < 1e-12


def test_gram_deviation_column_permutation():
    rng = np.random.default_rng(1)
    a = random_unit_columns(rng, 4, 9)
    perm = rng.permutation(9)
    d = gram_deviation(from_dense(a)).values
    dp = gram_deviation(from_dense(a[:, perm])).values
    assert np.allclose(dp, d[np.ix_(perm, perm)], atol=1e-14)


@pytest.mark.parametrize("tok,val", [
    ("1.5", 1.5), ("-2", -2), ("1+2i", 1 + 2j), ("1-2i", 1 - 2j), ("-0.5i", -0.5j),
    ("i", 1j), ("-i", -1j), ("3+i", 3 + 1j), ("1e-3-2.5e+2i", 1e-3 - 250j), ("2j", 2j),
])
def test_parse_complex(tok, val):
    assert parse_complex(tok) == val


def test_parse_complex_garbage():
    with pytest.raises(ValidationError):
        parse_complex("abc")


@pytest.mark.parametrize("complex_", [False, True])
def test_matrix_file_round_trip(tmp_path, complex_):
    rng = np.random.default_rng(4)
    phi = from_dense(random_unit_columns(rng, 3, 5, complex_=complex_))
    p = tmp_path / "m.txt"
    write_matrix_file(phi, p)
    head = p.read_text().splitlines()[0]
    assert head == f"3 5 {'complex' if complex_ else 'real'}"
    assert read_matrix_file(p) == phi


def test_matrix_file_errors():
    with pytest.raises(ValidationError):
        parse_matrix_text("2 2 quaternion\n1 0\n0 1\n")
    with pytest.raises(DimensionError):
        parse_matrix_text("2 2 real\n1 0\n")
    with pytest.raises(DimensionError):
        parse_matrix_text("2 2 real\n1 0 0\n0 1\n")
    with pytest.raises(ValidationError):
        parse_matrix_text("2 2 real\n1 0\n0 1i\n")
    assert parse_matrix_text("2 2 complex\n1 0\n0 1i\n").entries[1, 1] == 1j
