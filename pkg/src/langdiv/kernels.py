"""Frontier expansion kernels for outcome-tree enumeration.

One tree level is expanded at a time. Each frontier row carries a normalized
state and the joint probability of the word that led to it; every row is
branched over all symbols with the stacked per-symbol step matrices
``step[s] = U^p P(y_s)`` (quantum) or ``T^(p-1) T(y_s)`` (classical).

Child row ``f * n_symbols + s`` is the ``s``-th child of frontier row ``f``.
Children whose joint weight is ``<= theta`` are flagged dead and their state
row is left as zeros.

Two implementations exist for each kind: an explicit-loop version compiled by
numba and a vectorized numpy version. ``expand_quantum``/``expand_classical``
point at whichever :data:`langdiv._accel.USE_NUMBA` selects.
"""

import numpy as np

from langdiv._accel import USE_NUMBA, optional_njit


@optional_njit(cache=True)
def _expand_quantum_loops(states, weights, step, theta):
    n_front, dim = states.shape
    n_sym = step.shape[0]
    out_states = np.zeros((n_front * n_sym, dim), dtype=np.complex128)
    out_weights = np.zeros(n_front * n_sym, dtype=np.float64)
    alive = np.zeros(n_front * n_sym, dtype=np.bool_)
    v = np.empty(dim, dtype=np.complex128)
    for f in range(n_front):
        for s in range(n_sym):
            norm2 = 0.0
            for j in range(dim):
                acc = 0.0 + 0.0j
                for i in range(dim):
                    acc += states[f, i] * step[s, i, j]
                v[j] = acc
                norm2 += acc.real * acc.real + acc.imag * acc.imag
            w = weights[f] * norm2
            r = f * n_sym + s
            out_weights[r] = w
            if w > theta:
                alive[r] = True
                scale = 1.0 / np.sqrt(norm2)
                for j in range(dim):
                    out_states[r, j] = v[j] * scale
    return out_states, out_weights, alive


@optional_njit(cache=True)
def _expand_classical_loops(states, weights, step, theta):
    n_front, dim = states.shape
    n_sym = step.shape[0]
    out_states = np.zeros((n_front * n_sym, dim), dtype=np.float64)
    out_weights = np.zeros(n_front * n_sym, dtype=np.float64)
    alive = np.zeros(n_front * n_sym, dtype=np.bool_)
    v = np.empty(dim, dtype=np.float64)
    for f in range(n_front):
        for s in range(n_sym):
            total = 0.0
            for j in range(dim):
                acc = 0.0
                for i in range(dim):
                    acc += states[f, i] * step[s, i, j]
                v[j] = acc
                total += acc
            w = weights[f] * total
            r = f * n_sym + s
            out_weights[r] = w
            if w > theta:
                alive[r] = True
                for j in range(dim):
                    out_states[r, j] = v[j] / total
    return out_states, out_weights, alive


def _expand_quantum_numpy(states, weights, step, theta):
    n_front, dim = states.shape
    n_sym = step.shape[0]
    # (F, S, dim): row f pushed through every symbol's step matrix
    v = np.einsum("fi,sij->fsj", states, step).reshape(n_front * n_sym, dim)
    norm2 = np.einsum("rj,rj->r", v.real, v.real) + np.einsum("rj,rj->r", v.imag, v.imag)
    w = np.repeat(weights, n_sym) * norm2
    alive = w > theta
    out = np.zeros_like(v)
    out[alive] = v[alive] / np.sqrt(norm2[alive])[:, None]
    return out, w, alive


def _expand_classical_numpy(states, weights, step, theta):
    n_front, dim = states.shape
    n_sym = step.shape[0]
    v = np.einsum("fi,sij->fsj", states, step).reshape(n_front * n_sym, dim)
    total = v.sum(axis=1)
    w = np.repeat(weights, n_sym) * total
    alive = w > theta
    out = np.zeros_like(v)
    out[alive] = v[alive] / total[alive][:, None]
    return out, w, alive


def expand_quantum_numba(states, weights, step, theta):
    return _expand_quantum_loops(
        np.ascontiguousarray(states, dtype=np.complex128),
        np.ascontiguousarray(weights, dtype=np.float64),
        np.ascontiguousarray(step, dtype=np.complex128),
        float(theta),
    )


def expand_classical_numba(states, weights, step, theta):
    return _expand_classical_loops(
        np.ascontiguousarray(states, dtype=np.float64),
        np.ascontiguousarray(weights, dtype=np.float64),
        np.ascontiguousarray(step, dtype=np.float64),
        float(theta),
    )


expand_quantum_numpy = _expand_quantum_numpy
expand_classical_numpy = _expand_classical_numpy

if USE_NUMBA:
    expand_quantum = expand_quantum_numba
    expand_classical = expand_classical_numba
else:
    expand_quantum = expand_quantum_numpy
    expand_classical = expand_classical_numpy

BACKEND = "numba" if USE_NUMBA else "numpy"
