"""Small dense complex matrices: structural predicates and exact powers."""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from langdiv.errors import DimensionMismatch, NonRealMatrix

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class TolerancePolicy:
    """Numerical tolerances used across the package.

    ``norm`` bounds state normalization error, ``struct`` is used for
    unitary/projector/stochastic validation, ``prune`` is the probability
    below which a branch of the outcome tree is dropped, and ``language`` is
    the default δ for language similarity.
    """

    norm: float = 1e-9
    struct: float = 1e-9
    prune: float = 1e-12
    language: float = 1e-9

    def __post_init__(self):
        for name in ("norm", "struct", "prune", "language"):
            value = getattr(self, name)
            if not (0.0 < value < 1.0):
                raise ValueError(f"tolerance {name}={value!r} must lie in (0, 1)")


DEFAULT_POLICY = TolerancePolicy()


def as_square_matrix(m, dtype=np.complex128) -> np.ndarray:
    """Return ``m`` as a finite square 2-d array, raising on malformed input."""
    arr = np.array(m, dtype=dtype)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise DimensionMismatch(f"expected a non-empty square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix has non-finite entries")
    return arr


def validate_unitary(m, tol: float = DEFAULT_TOL) -> bool:
    m = as_square_matrix(m)
    dev = m @ m.conj().T - np.eye(m.shape[0])
    return bool(np.max(np.abs(dev)) <= tol)


def validate_projector(p, tol: float = DEFAULT_TOL) -> bool:
    """True iff ``p`` is Hermitian and idempotent within ``tol``."""
    p = as_square_matrix(p)
    hermitian = np.max(np.abs(p - p.conj().T)) <= tol
    idempotent = np.max(np.abs(p @ p - p)) <= tol
    return bool(hermitian and idempotent)


class StochasticClass(NamedTuple):
    stochastic: bool
    doubly_stochastic: bool


def classify_stochastic(m, tol: float = DEFAULT_TOL) -> StochasticClass:
    m = as_square_matrix(m)
    if np.max(np.abs(m.imag)) > tol:
        raise NonRealMatrix("matrix has entries with non-negligible imaginary part")
    r = m.real
    in_range = bool(np.all(r >= -tol) and np.all(r <= 1.0 + tol))
    rows = bool(np.all(np.abs(r.sum(axis=1) - 1.0) <= tol))
    stochastic = in_range and rows
    cols = bool(np.all(np.abs(r.sum(axis=0) - 1.0) <= tol))
    return StochasticClass(stochastic, stochastic and cols)


def matrix_power(m, k: int) -> np.ndarray:
    """``m**k`` by binary exponentiation; ``m**0`` is the identity.

    The result keeps the dtype of ``m`` (real stays real).
    """
    if k < 0:
        raise ValueError("exponent must be non-negative")
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    result = np.eye(m.shape[0], dtype=m.dtype)
    base = m.copy()
    while k:
        if k & 1:
            result = result @ base
        k >>= 1
        if k:
            base = base @ base
    return result


def is_permutation_matrix(m, tol: float = DEFAULT_TOL) -> bool:
    m = np.asarray(m)
    a = np.abs(m)
    ones = np.abs(a - 1.0) <= tol
    zeros = a <= tol
    if not np.all(ones | zeros):
        return False
    return bool(np.all(ones.sum(axis=0) == 1) and np.all(ones.sum(axis=1) == 1))


def permutation_order(m, tol: float = DEFAULT_TOL) -> int:
    """Order of a 0/1 permutation matrix (lcm of its cycle lengths)."""
    if not is_permutation_matrix(m, tol) or np.max(np.abs(np.asarray(m) - np.abs(m))) > tol:
        raise ValueError("not a 0/1 permutation matrix")
    target = np.argmax(np.abs(np.asarray(m)), axis=1)
    seen = np.zeros(len(target), dtype=bool)
    order = 1
    for start in range(len(target)):
        if seen[start]:
            continue
        length, i = 0, start
        while not seen[i]:
            seen[i] = True
            i = target[i]
            length += 1
        order = np.lcm(order, length)
    return int(order)
