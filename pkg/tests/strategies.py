"""Hypothesis strategies for small random generators."""

import numpy as np
from hypothesis import assume
from hypothesis import strategies as st

from langdiv.machines import QuantumGenerator, is_deterministic

H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


@st.composite
def permutation_matrices(draw, n):
    perm = draw(st.permutations(range(n)))
    m = np.zeros((n, n), dtype=complex)
    m[np.arange(n), perm] = 1.0
    return m


@st.composite
def qdg_unitaries(draw, n):
    """Permutation, or permuted block-diagonal of Hadamard blocks and phases."""
    left = draw(permutation_matrices(n))
    if draw(st.booleans()):
        return left
    blocks = []
    i = 0
    while i < n:
        if i + 1 < n and draw(st.booleans()):
            blocks.append(H)
            i += 2
        else:
            blocks.append(np.array([[1.0]]))
            i += 1
    core = np.zeros((n, n), dtype=complex)
    at = 0
    for b in blocks:
        k = b.shape[0]
        core[at:at + k, at:at + k] = b
        at += k
    phases = np.exp(1j * np.array(draw(st.lists(st.floats(0, 2 * np.pi), min_size=n, max_size=n))))
    right = draw(permutation_matrices(n))
    return left @ core @ np.diag(phases) @ right


@st.composite
def partitions(draw, n, max_symbols=3):
    k = draw(st.integers(1, min(n, max_symbols)))
    labels = draw(st.lists(st.integers(0, k - 1), min_size=n, max_size=n))
    # every symbol gets at least one state
    for s in range(k):
        labels[s] = s
    labels = draw(st.permutations(labels))
    return {str(s): [i for i in range(n) if labels[i] == s] for s in range(k)}


@st.composite
def random_qdgs(draw, min_dim=2, max_dim=4):
    n = draw(st.integers(min_dim, max_dim))
    u = draw(qdg_unitaries(n))
    part = draw(partitions(n))
    q = QuantumGenerator.from_partition(u, part, name="random")
    assume(is_deterministic(q))
    return q


@st.composite
def permutation_machines(draw, min_dim=2, max_dim=5):
    n = draw(st.integers(min_dim, max_dim))
    u = draw(permutation_matrices(n))
    part = draw(partitions(n, max_symbols=2))
    return QuantumGenerator.from_partition(u, part, name="perm")
