"""Classical and quantum finite-state generators.

States are row vectors acted on from the left: a quantum step is
``psi @ U @ P(y)`` and a classical step is ``pi @ T(y)``. Under this
convention the quantum symbol matrix is ``U @ P(y)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence, Union

import numpy as np

from langdiv.errors import (
    DimensionMismatch,
    IncompleteCover,
    IndexOutOfRange,
    OverlappingSubspaces,
    UnknownSymbol,
    ValidationError,
)
from langdiv.matrix import (
    DEFAULT_POLICY,
    as_square_matrix,
    classify_stochastic,
    validate_projector,
    validate_unitary,
)

Word = Sequence[str]


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a)
    a.setflags(write=False)
    return a


def _check_alphabet(alphabet: Sequence[str]) -> tuple:
    alphabet = tuple(alphabet)
    if not alphabet:
        raise ValidationError("alphabet must be non-empty")
    for sym in alphabet:
        if not isinstance(sym, str) or not sym:
            raise ValidationError(f"alphabet symbols must be non-empty strings, got {sym!r}")
    if len(set(alphabet)) != len(alphabet):
        raise ValidationError("alphabet symbols must be unique")
    return alphabet


def build_projectors(partition: Mapping[str, Iterable[int]], dim: int) -> dict:
    """Diagonal 0/1 projectors from a partition of basis indices.

    ``partition`` maps each symbol to the set of basis states that make up its
    outcome subspace. The sets must be disjoint and cover ``range(dim)``.
    """
    owner = {}
    projectors = {}
    for sym, indices in partition.items():
        diag = np.zeros(dim)
        for i in indices:
            i = int(i)
            if not 0 <= i < dim:
                raise IndexOutOfRange(f"projector {sym!r}: index {i} outside [0, {dim})")
            if i in owner:
                raise OverlappingSubspaces(
                    f"basis state {i} assigned to both {owner[i]!r} and {sym!r}"
                )
            owner[i] = sym
            diag[i] = 1.0
        projectors[sym] = np.diag(diag).astype(np.complex128)
    missing = sorted(set(range(dim)) - owner.keys())
    if missing:
        raise IncompleteCover(f"basis states {missing} belong to no projector")
    return projectors


def partition_of(projectors: Mapping[str, np.ndarray]) -> dict:
    return {sym: tuple(int(i) for i in np.flatnonzero(np.abs(np.diag(p)) > 0.5))
            for sym, p in projectors.items()}


def _check_projector_family(projectors, alphabet, dim, tol):
    if set(projectors) != set(alphabet):
        raise ValidationError("projectors must be given for exactly the alphabet symbols")
    total = np.zeros((dim, dim), dtype=np.complex128)
    for sym in alphabet:
        p = projectors[sym]
        if p.shape != (dim, dim):
            raise DimensionMismatch(f"projector {sym!r} has shape {p.shape}, expected {(dim, dim)}")
        if not validate_projector(p, tol):
            raise ValidationError(f"P({sym}) is not a Hermitian idempotent")
        off = p - np.diag(np.diag(p))
        d = np.diag(p)
        if np.max(np.abs(off)) > tol or not np.all((np.abs(d) <= tol) | (np.abs(d - 1) <= tol)):
            raise ValidationError(f"P({sym}) is not a diagonal 0/1 projector")
        total = total + p
    if np.max(np.abs(total - np.eye(dim))) > tol:
        raise ValidationError("projectors do not sum to the identity")
    # diagonal 0/1 projectors summing to I are automatically pairwise orthogonal


@dataclass(frozen=True, eq=False)
class QuantumGenerator:
    """Unitary evolution plus a diagonal projector per output symbol."""

    states: tuple
    alphabet: tuple
    unitary: np.ndarray
    projectors: dict
    name: str = "quantum"
    tol: float = field(default=DEFAULT_POLICY.struct, repr=False)

    def __post_init__(self):
        alphabet = _check_alphabet(self.alphabet)
        u = as_square_matrix(self.unitary)
        dim = u.shape[0]
        states = tuple(self.states) if self.states is not None else tuple(f"q{i}" for i in range(dim))
        if len(states) != dim:
            raise DimensionMismatch(f"{len(states)} state names for a {dim}-dimensional unitary")
        if not validate_unitary(u, self.tol):
            dev = np.abs(u @ u.conj().T - np.eye(dim))
            row = int(np.argmax(dev.max(axis=1)))
            raise ValidationError(f"unitary is not unitary (row {row} deviates by {dev.max():.3g})")
        projectors = {sym: as_square_matrix(p) for sym, p in self.projectors.items()}
        _check_projector_family(projectors, alphabet, dim, self.tol)
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "unitary", _readonly(u))
        object.__setattr__(self, "projectors", {s: _readonly(projectors[s]) for s in alphabet})

    @classmethod
    def from_partition(cls, unitary, partition: Mapping[str, Iterable[int]], *,
                       states=None, alphabet=None, name="quantum") -> "QuantumGenerator":
        u = as_square_matrix(unitary)
        projectors = build_projectors(partition, u.shape[0])
        alphabet = tuple(alphabet) if alphabet is not None else tuple(partition)
        return cls(states, alphabet, u, projectors, name=name)

    @property
    def dim(self) -> int:
        return self.unitary.shape[0]

    @property
    def partition(self) -> dict:
        return partition_of(self.projectors)

    def symbol_matrix(self, y: str) -> np.ndarray:
        """``U @ P(y)``, the transition matrix for emitting ``y``."""
        return self.unitary @ self.projector(y)

    def projector(self, y: str) -> np.ndarray:
        try:
            return self.projectors[y]
        except KeyError:
            raise UnknownSymbol(f"symbol {y!r} not in alphabet {list(self.alphabet)}") from None


@dataclass(frozen=True, eq=False)
class ClassicalGenerator:
    """Stochastic generator given by one substochastic matrix per symbol.

    When built with :meth:`from_factorization` the machine also keeps the
    state-to-state matrix ``T`` and projectors with ``T(y) = T @ P(y)``.
    """

    states: tuple
    alphabet: tuple
    symbol_matrices: dict
    transition: Optional[np.ndarray] = None
    projectors: Optional[dict] = None
    name: str = "classical"
    tol: float = field(default=DEFAULT_POLICY.struct, repr=False)

    def __post_init__(self):
        tol = self.tol
        alphabet = _check_alphabet(self.alphabet)
        if set(self.symbol_matrices) != set(alphabet):
            raise ValidationError("symbol matrices must be given for exactly the alphabet symbols")
        mats = {}
        dim = None
        for sym in alphabet:
            m = as_square_matrix(self.symbol_matrices[sym], dtype=np.float64)
            if dim is None:
                dim = m.shape[0]
            elif m.shape[0] != dim:
                raise DimensionMismatch(f"T({sym}) has shape {m.shape}, expected {(dim, dim)}")
            if np.any(m < -tol) or np.any(m > 1 + tol):
                raise ValidationError(f"T({sym}) has entries outside [0, 1]")
            mats[sym] = m
        states = tuple(self.states) if self.states is not None else tuple(f"s{i}" for i in range(dim))
        if len(states) != dim:
            raise DimensionMismatch(f"{len(states)} state names for {dim}-state matrices")
        total = sum(mats.values())
        sums = total.sum(axis=1)
        bad = np.flatnonzero(np.abs(sums - 1.0) > tol)
        if bad.size:
            raise ValidationError(
                f"row {int(bad[0])} of the summed symbol matrices sums to {sums[bad[0]]:.12g}, not 1"
            )
        if not classify_stochastic(total, tol).stochastic:
            raise ValidationError("state-to-state matrix is not stochastic")
        transition = self.transition
        projectors = self.projectors
        if (transition is None) != (projectors is None):
            raise ValidationError("a factorization needs both transition and projectors")
        if transition is not None:
            transition = as_square_matrix(transition, dtype=np.float64)
            projectors = {s: as_square_matrix(p) for s, p in projectors.items()}
            _check_projector_family(projectors, alphabet, dim, tol)
            for sym in alphabet:
                if np.max(np.abs(transition @ projectors[sym].real - mats[sym])) > tol:
                    raise ValidationError(f"T({sym}) != T @ P({sym})")
            transition = _readonly(transition)
            projectors = {s: _readonly(projectors[s]) for s in alphabet}
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "symbol_matrices", {s: _readonly(mats[s]) for s in alphabet})
        object.__setattr__(self, "transition", transition)
        object.__setattr__(self, "projectors", projectors)

    @classmethod
    def from_factorization(cls, transition, partition: Mapping[str, Iterable[int]], *,
                           states=None, alphabet=None, name="classical") -> "ClassicalGenerator":
        t = as_square_matrix(transition, dtype=np.float64)
        projectors = build_projectors(partition, t.shape[0])
        alphabet = tuple(alphabet) if alphabet is not None else tuple(partition)
        mats = {s: t @ projectors[s].real for s in alphabet}
        return cls(states, alphabet, mats, transition=t, projectors=projectors, name=name)

    @property
    def dim(self) -> int:
        return next(iter(self.symbol_matrices.values())).shape[0]

    @property
    def has_factorization(self) -> bool:
        return self.transition is not None

    @property
    def state_transition(self) -> np.ndarray:
        """``T = sum_y T(y)``."""
        if self.transition is not None:
            return np.array(self.transition)
        return sum(np.array(m) for m in self.symbol_matrices.values())

    def symbol_matrix(self, y: str) -> np.ndarray:
        try:
            return self.symbol_matrices[y]
        except KeyError:
            raise UnknownSymbol(f"symbol {y!r} not in alphabet {list(self.alphabet)}") from None


Machine = Union[QuantumGenerator, ClassicalGenerator]


def is_deterministic(machine: Machine, tol: float = DEFAULT_POLICY.struct) -> bool:
    """At most one entry with modulus above ``tol`` per row of every symbol matrix."""
    for y in machine.alphabet:
        nonzero = np.abs(machine.symbol_matrix(y)) > tol
        if np.any(nonzero.sum(axis=1) > 1):
            return False
    return True


def classical_analog(q: QuantumGenerator) -> ClassicalGenerator:
    """Square the moduli of ``U`` and keep the projectors."""
    t = np.abs(np.asarray(q.unitary)) ** 2
    return ClassicalGenerator.from_factorization(
        t, q.partition, states=q.states, alphabet=q.alphabet, name=f"{q.name}-analog"
    )


def _state(vec, dim: int, dtype) -> np.ndarray:
    v = np.asarray(vec, dtype=dtype)
    if v.shape != (dim,):
        raise DimensionMismatch(f"state has shape {v.shape}, machine dimension is {dim}")
    return v


def step_quantum(q: QuantumGenerator, psi, y: str, theta: float = DEFAULT_POLICY.prune):
    """One unitary step followed by projection onto ``y``.

    Returns ``(psi_next, prob)``; ``psi_next`` is None when ``prob <= theta``.
    """
    psi = _state(psi, q.dim, np.complex128)
    v = psi @ q.unitary @ q.projector(y)
    prob = float(np.vdot(v, v).real)
    if prob <= theta:
        return None, prob
    return v / np.sqrt(prob), prob


def _split_word(machine: Machine, w) -> tuple:
    if isinstance(w, str):
        if all(len(s) == 1 for s in machine.alphabet):
            return tuple(w)
        return tuple(x for x in w.split("·") if x)
    return tuple(w)


def word_probability_quantum(q: QuantumGenerator, psi0, w) -> float:
    """``|| psi0 prod_i U P(w_i) ||^2``."""
    v = _state(psi0, q.dim, np.complex128)
    for y in _split_word(q, w):
        v = v @ q.unitary @ q.projector(y)
    return float(np.vdot(v, v).real)


def word_probability_classical(g: ClassicalGenerator, pi0, w) -> float:
    """``<pi0| prod_i T(w_i) |eta>`` with all states accepting."""
    v = _state(pi0, g.dim, np.float64)
    for y in _split_word(g, w):
        v = v @ g.symbol_matrix(y)
    return float(v.sum())


def word_probability(machine: Machine, state0, w) -> float:
    if isinstance(machine, QuantumGenerator):
        return word_probability_quantum(machine, state0, w)
    return word_probability_classical(machine, state0, w)
