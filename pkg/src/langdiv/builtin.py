"""Example machines: iterated beam splitter, spin-1/2 kicked top, period-5 processes."""

import numpy as np

from langdiv.machines import ClassicalGenerator, QuantumGenerator, classical_analog

HADAMARD = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)

# row i has its single 1 in column sigma(i): 0->2->1->3->4->0
PERIOD5_PERMUTATION = np.array(
    [
        [0, 0, 1, 0, 0],
        [0, 0, 0, 1, 0],
        [0, 1, 0, 0, 0],
        [0, 0, 0, 0, 1],
        [1, 0, 0, 0, 0],
    ],
    dtype=np.complex128,
)

# basis states emitting "1" for each template word
PERIOD5_ONES = {
    "10000": (2,),
    "11000": (1, 2),
    "10101": (0, 2, 3),
}

DEFAULT_KICK_PHASE = 0.5


def beam_splitter() -> QuantumGenerator:
    return QuantumGenerator.from_partition(
        HADAMARD, {"0": [0], "1": [1]}, states=("upper", "lower"), name="beam-splitter"
    )


def kicked_top_unitary(phase: float = DEFAULT_KICK_PHASE) -> np.ndarray:
    rotation = np.array([[1, -1], [1, 1]], dtype=np.complex128) / np.sqrt(2)
    return rotation @ (np.exp(-1j * phase) * np.eye(2))


def kicked_top(phase: float = DEFAULT_KICK_PHASE) -> QuantumGenerator:
    return QuantumGenerator.from_partition(
        kicked_top_unitary(phase), {"0": [0], "1": [1]}, states=("up", "down"), name="kicked-top"
    )


def period5(template: str) -> QuantumGenerator:
    try:
        ones = PERIOD5_ONES[template]
    except KeyError:
        raise ValueError(f"unknown period-5 template {template!r}; one of {sorted(PERIOD5_ONES)}") from None
    zeros = [i for i in range(5) if i not in ones]
    return QuantumGenerator.from_partition(
        PERIOD5_PERMUTATION, {"0": zeros, "1": list(ones)},
        states=tuple(f"s{i}" for i in range(5)), name=f"period5-{template}",
    )


def fair_coin_one_state() -> ClassicalGenerator:
    return ClassicalGenerator(("s0",), ("0", "1"), {"0": [[0.5]], "1": [[0.5]]}, name="fair-coin-1state")


BUILTINS = {
    "beam-splitter": beam_splitter,
    "kicked-top": kicked_top,
    "period5-10000": lambda: period5("10000"),
    "period5-11000": lambda: period5("11000"),
    "period5-10101": lambda: period5("10101"),
    "fair-coin-1state": fair_coin_one_state,
}


def get_builtin(name: str, phase: float = DEFAULT_KICK_PHASE, analog: bool = False):
    if name not in BUILTINS:
        raise KeyError(f"unknown example {name!r}; available: {', '.join(BUILTINS)}")
    machine = kicked_top(phase) if name == "kicked-top" else BUILTINS[name]()
    if analog:
        if not isinstance(machine, QuantumGenerator):
            raise ValueError(f"{name} is already classical")
        machine = classical_analog(machine)
    return machine
