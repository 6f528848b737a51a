import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from langdiv.builtin import PERIOD5_PERMUTATION, kicked_top_unitary
from langdiv.errors import NonRealMatrix
from langdiv.matrix import (
    TolerancePolicy,
    classify_stochastic,
    matrix_power,
    permutation_order,
    validate_projector,
    validate_unitary,
)

from strategies import qdg_unitaries


def test_hadamard_is_unitary(hadamard):
    assert validate_unitary(hadamard, 1e-9)


@pytest.mark.parametrize("n", [1, 2, 5])
def test_identity_is_unitary(n):
    assert validate_unitary(np.eye(n), 1e-9)


def test_shear_is_not_unitary():
    assert not validate_unitary([[1, 1], [0, 1]], 1e-9)


@pytest.mark.parametrize(
    "p, expected",
    [
        (np.diag([1.0, 0.0]), True),
        (np.zeros((3, 3)), True),
        (np.array([[1, 1], [1, -1]]) / np.sqrt(2), False),
    ],
    ids=["diag10", "zero", "hadamard"],
)
def test_validate_projector(p, expected):
    assert validate_projector(p, 1e-9) is expected


def test_classify_stochastic_examples():
    assert classify_stochastic([[0.5, 0.5], [0.5, 0.5]], 1e-9) == (True, True)
    assert classify_stochastic(PERIOD5_PERMUTATION, 1e-9) == (True, True)
    assert classify_stochastic([[0.3, 0.6], [0.5, 0.5]], 1e-9) == (False, False)
    assert classify_stochastic([[0.2, 0.8], [0.5, 0.5]], 1e-9) == (True, False)


def test_classify_rejects_complex():
    with pytest.raises(NonRealMatrix):
        classify_stochastic([[0.5j, 0.5], [0.5, 0.5]])


def test_matrix_power_examples(hadamard):
    np.testing.assert_allclose(matrix_power(hadamard, 2), np.eye(2), atol=1e-12)
    np.testing.assert_allclose(matrix_power(PERIOD5_PERMUTATION, 5), np.eye(5), atol=1e-12)
    # rotation by 45 degrees squared, by hand: [[0, -1], [1, 0]]
    np.testing.assert_allclose(matrix_power(kicked_top_unitary(0.0), 2), [[0, -1], [1, 0]], atol=1e-12)
    np.testing.assert_array_equal(matrix_power(hadamard, 0), np.eye(2))


@given(st.integers(0, 40))
def test_matrix_power_matches_repeated_product(k):
    u = kicked_top_unitary(0.7)
    ref = np.eye(2, dtype=complex)
    for _ in range(k):
        ref = ref @ u
    np.testing.assert_allclose(matrix_power(u, k), ref, atol=1e-12)


def test_matrix_power_keeps_real_dtype():
    assert matrix_power(np.array([[0.5, 0.5], [0.5, 0.5]]), 3).dtype == np.float64


def test_permutation_order():
    assert permutation_order(PERIOD5_PERMUTATION) == 5
    assert permutation_order(np.eye(3)) == 1
    swap_and_fix = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 1]])
    assert permutation_order(swap_and_fix) == 2


def test_tolerance_policy_rejects_bad_values():
    TolerancePolicy()
    with pytest.raises(ValueError):
        TolerancePolicy(norm=0.0)
    with pytest.raises(ValueError):
        TolerancePolicy(prune=1.5)


@given(st.integers(2, 5).flatmap(qdg_unitaries), st.integers(0, 30))
def test_powers_of_unitaries_stay_unitary(u, k):
    assert validate_unitary(matrix_power(u, k), 1e-9)


@given(st.integers(2, 5).flatmap(qdg_unitaries))
def test_squared_modulus_of_unitary_is_doubly_stochastic(u):
    assert classify_stochastic(np.abs(u) ** 2, 1e-9).doubly_stochastic


@given(st.integers(2, 6).flatmap(lambda n: st.tuples(st.just(n), st.sets(st.integers(0, n - 1)))))
def test_sum_of_orthogonal_projectors_is_projector(arg):
    n, subset = arg
    p = np.diag([1.0 if i in subset else 0.0 for i in range(n)])
    q = np.eye(n) - p
    assert validate_projector(p) and validate_projector(q)
    assert np.allclose(p @ q, 0)
    assert validate_projector(p + q)
