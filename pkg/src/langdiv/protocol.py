"""Measurement protocols and breadth-first language enumeration.

With measurement period ``p`` the machine evolves ``p`` steps between
observations and one symbol is emitted per observation:

* quantum:   ``psi <- psi @ U^p @ P(y)``        (then renormalize)
* classical: ``pi  <- pi  @ T^(p-1) @ T(y)``    (then renormalize)

The first observation happens after the first ``p`` steps.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from langdiv import kernels
from langdiv.errors import DimensionMismatch, UnknownSymbol
from langdiv.languages import StochasticLanguage
from langdiv.machines import ClassicalGenerator, Machine, QuantumGenerator
from langdiv.matrix import DEFAULT_POLICY, matrix_power


@dataclass(frozen=True)
class InitialState:
    """Where enumeration starts.

    ``basis`` is one computational basis state. ``uniform`` weights the basis
    states in ``indices`` (all of them when None) equally: for classical
    machines this is the uniform distribution; for quantum machines it is the
    equal-weight *ensemble* of basis states, not the coherent superposition
    (pass that as ``explicit``). ``explicit`` takes a state vector.
    """

    kind: str
    index: Optional[int] = None
    indices: Optional[tuple] = None
    vector: Optional[tuple] = None

    @classmethod
    def basis(cls, i: int) -> "InitialState":
        return cls("basis", index=int(i))

    @classmethod
    def uniform(cls, indices: Optional[Sequence[int]] = None) -> "InitialState":
        return cls("uniform", indices=None if indices is None else tuple(sorted(int(i) for i in indices)))

    @classmethod
    def explicit(cls, vector) -> "InitialState":
        return cls("explicit", vector=tuple(complex(x) for x in np.ravel(vector)))

    @classmethod
    def parse(cls, text: str) -> "InitialState":
        """Parse ``basis:<i>`` or ``uniform``."""
        text = text.strip()
        if text == "uniform":
            return cls.uniform()
        if text.startswith("basis:"):
            return cls.basis(int(text.split(":", 1)[1]))
        raise ValueError(f"initial state must be 'basis:<i>' or 'uniform', got {text!r}")

    def __post_init__(self):
        if self.kind not in ("basis", "uniform", "explicit"):
            raise ValueError(f"unknown initial-state kind {self.kind!r}")
        if self.kind == "basis" and (self.index is None or self.index < 0):
            raise ValueError("basis initial state needs a non-negative index")
        if self.kind == "uniform" and self.indices is not None and not self.indices:
            raise ValueError("uniform initial state over an empty set")
        if self.kind == "explicit" and not self.vector:
            raise ValueError("explicit initial state needs a vector")

    def describe(self) -> str:
        if self.kind == "basis":
            return f"basis:{self.index}"
        if self.kind == "uniform":
            if self.indices is None:
                return "uniform"
            return "uniform:{" + ",".join(map(str, self.indices)) + "}"
        return "explicit"

    def resolve(self, machine: Machine, tol: float = DEFAULT_POLICY.norm):
        """Return ``(states, weights)``: ensemble members as rows and their weights."""
        n = machine.dim
        quantum = isinstance(machine, QuantumGenerator)
        dtype = np.complex128 if quantum else np.float64
        if self.kind == "basis":
            if self.index >= n:
                raise DimensionMismatch(f"basis index {self.index} outside machine dimension {n}")
            states = np.zeros((1, n), dtype=dtype)
            states[0, self.index] = 1.0
            return states, np.ones(1)
        if self.kind == "uniform":
            idx = list(range(n)) if self.indices is None else list(self.indices)
            if max(idx) >= n:
                raise DimensionMismatch(f"basis index {max(idx)} outside machine dimension {n}")
            if quantum:
                states = np.zeros((len(idx), n), dtype=dtype)
                states[np.arange(len(idx)), idx] = 1.0
                return states, np.full(len(idx), 1.0 / len(idx))
            states = np.zeros((1, n), dtype=dtype)
            states[0, idx] = 1.0 / len(idx)
            return states, np.ones(1)
        v = np.asarray(self.vector, dtype=np.complex128)
        if v.shape != (n,):
            raise DimensionMismatch(f"initial vector has length {v.size}, machine dimension is {n}")
        if quantum:
            norm2 = float(np.vdot(v, v).real)
            if abs(norm2 - 1.0) > tol:
                v = v / np.sqrt(norm2)
            return v[None, :], np.ones(1)
        if np.max(np.abs(v.imag)) > tol or np.any(v.real < -tol):
            raise ValueError("classical initial distribution must be real and non-negative")
        p = v.real / v.real.sum()
        return p[None, :], np.ones(1)


@dataclass(frozen=True)
class MeasurementProtocol:
    period: int
    initial: InitialState

    def __post_init__(self):
        if int(self.period) < 1:
            raise ValueError("measurement period must be >= 1")


@dataclass(frozen=True)
class EnumerationConfig:
    max_length: int
    prune_threshold: float = DEFAULT_POLICY.prune

    def __post_init__(self):
        if self.max_length < 1:
            raise ValueError("max_length must be >= 1")
        if not 0.0 < self.prune_threshold < 1.0:
            raise ValueError("prune_threshold must lie in (0, 1)")


def step_matrices(machine: Machine, period: int) -> np.ndarray:
    """Stacked per-symbol matrices for one measured step, in alphabet order."""
    if period < 1:
        raise ValueError("measurement period must be >= 1")
    if isinstance(machine, QuantumGenerator):
        up = matrix_power(np.asarray(machine.unitary), period)
        return np.stack([up @ machine.projectors[y] for y in machine.alphabet])
    lead = matrix_power(machine.state_transition, period - 1)
    return np.stack([lead @ machine.symbol_matrices[y] for y in machine.alphabet])


def _symbol_index(machine: Machine, y: str) -> int:
    if y not in machine.alphabet:
        raise UnknownSymbol(f"symbol {y!r} not in alphabet {list(machine.alphabet)}")
    return machine.alphabet.index(y)


def measured_step_quantum(q: QuantumGenerator, psi, period: int, y: str,
                          theta: float = DEFAULT_POLICY.prune):
    """``psi @ U^p @ P(y)``; returns ``(psi_next or None, prob)``."""
    psi = np.asarray(psi, dtype=np.complex128)
    if psi.shape != (q.dim,):
        raise DimensionMismatch(f"state has shape {psi.shape}, machine dimension is {q.dim}")
    step = step_matrices(q, period)[_symbol_index(q, y)]
    v = psi @ step
    prob = float(np.vdot(v, v).real)
    if prob <= theta:
        return None, prob
    return v / np.sqrt(prob), prob


def measured_step_classical(g: ClassicalGenerator, pi, period: int, y: str,
                            theta: float = DEFAULT_POLICY.prune):
    """``pi @ T^(p-1) @ T(y)``; returns ``(pi_next or None, prob)``."""
    pi = np.asarray(pi, dtype=np.float64)
    if pi.shape != (g.dim,):
        raise DimensionMismatch(f"state has shape {pi.shape}, machine dimension is {g.dim}")
    step = step_matrices(g, period)[_symbol_index(g, y)]
    v = pi @ step
    prob = float(v.sum())
    if prob <= theta:
        return None, prob
    return v / prob, prob


def _kernel(quantum: bool, backend: Optional[str]):
    if backend is None:
        return kernels.expand_quantum if quantum else kernels.expand_classical
    if backend == "numba":
        return kernels.expand_quantum_numba if quantum else kernels.expand_classical_numba
    if backend == "numpy":
        return kernels.expand_quantum_numpy if quantum else kernels.expand_classical_numpy
    raise ValueError(f"unknown backend {backend!r}")


def enumerate_language(machine: Machine, protocol: MeasurementProtocol,
                       cfg: EnumerationConfig, backend: Optional[str] = None) -> StochasticLanguage:
    """Walk the outcome tree level by level up to ``cfg.max_length``.

    Every word with probability above the prune threshold is recorded.
    Ensemble initial states are carried as separate frontier rows and their
    weights are summed per word.
    """
    quantum = isinstance(machine, QuantumGenerator)
    expand = _kernel(quantum, backend)
    theta = cfg.prune_threshold
    n_sym = len(machine.alphabet)
    if n_sym ** cfg.max_length >= 2 ** 62:
        raise ValueError("alphabet size and max_length too large for word encoding")
    step = step_matrices(machine, protocol.period)
    states, weights = protocol.initial.resolve(machine)
    codes = np.zeros(len(weights), dtype=np.int64)
    words = {}
    for length in range(1, cfg.max_length + 1):
        states, weights, alive = expand(states, weights, step, theta)
        codes = (np.repeat(codes, n_sym) * n_sym + np.tile(np.arange(n_sym), len(codes)))
        states, weights, codes = states[alive], weights[alive], codes[alive]
        if not len(codes):
            break
        uniq, inverse = np.unique(codes, return_inverse=True)
        totals = np.bincount(inverse, weights=weights)
        for code, total in zip(uniq.tolist(), totals.tolist()):
            if total > theta:
                words[_decode(code, length, machine.alphabet)] = total
    return StochasticLanguage(machine.alphabet, cfg.max_length, words, theta)


def _decode(code: int, length: int, alphabet) -> tuple:
    n = len(alphabet)
    out = [None] * length
    for i in range(length - 1, -1, -1):
        code, d = divmod(code, n)
        out[i] = alphabet[d]
    return tuple(out)
