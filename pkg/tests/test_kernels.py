"""Both expansion backends must agree to rounding."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from langdiv import kernels
from langdiv.protocol import EnumerationConfig, InitialState, MeasurementProtocol, enumerate_language, step_matrices

from strategies import random_qdgs


def _random_frontier(rng, n_front, dim, quantum):
    if quantum:
        s = rng.normal(size=(n_front, dim)) + 1j * rng.normal(size=(n_front, dim))
        s /= np.linalg.norm(s, axis=1)[:, None]
    else:
        s = rng.random((n_front, dim))
        s /= s.sum(axis=1)[:, None]
    return s, rng.random(n_front)


@pytest.mark.parametrize("quantum", [True, False], ids=["quantum", "classical"])
def test_backends_agree_on_random_frontier(rng, quantum, kicked_top):
    step = step_matrices(kicked_top, 3)
    if not quantum:
        step = np.abs(step) ** 2
    states, weights = _random_frontier(rng, 17, 2, quantum)
    fast = (kernels.expand_quantum_numba if quantum else kernels.expand_classical_numba)(states, weights, step, 1e-12)
    slow = (kernels.expand_quantum_numpy if quantum else kernels.expand_classical_numpy)(states, weights, step, 1e-12)
    for a, b in zip(fast, slow):
        np.testing.assert_allclose(a, b, atol=1e-14)


def test_dead_children_are_flagged(p10000):
    step = step_matrices(p10000, 1)
    states = np.eye(5, dtype=complex)[:1]
    out, w, alive = kernels.expand_quantum_numba(states, np.ones(1), step, 1e-12)
    # basis 0 moves to basis 2, which emits "1"
    assert alive.tolist() == [False, True]
    assert w.tolist() == [0.0, 1.0]
    np.testing.assert_array_equal(out[0], 0)


@given(random_qdgs(), st.integers(1, 4))
def test_enumeration_identical_across_backends(q, period):
    proto = MeasurementProtocol(period, InitialState.uniform())
    cfg = EnumerationConfig(5)
    a = enumerate_language(q, proto, cfg, backend="numba")
    b = enumerate_language(q, proto, cfg, backend="numpy")
    assert a.words.keys() == b.words.keys()
    for w in a.words:
        assert a.words[w] == pytest.approx(b.words[w], abs=1e-14)


def test_backend_flag_is_reported():
    assert kernels.BACKEND in ("numba", "numpy")


def test_unknown_backend(beam_splitter):
    with pytest.raises(ValueError):
        enumerate_language(beam_splitter, MeasurementProtocol(1, InitialState.basis(0)),
                           EnumerationConfig(2), backend="cuda")
