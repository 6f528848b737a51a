"""Language diversity of quantum and classical deterministic generators."""

from langdiv.diversity import DiversityReport, SweepConfig, pseudo_period, sweep
from langdiv.languages import FormalLanguage, StochasticLanguage, delta_similar, support
from langdiv.machines import ClassicalGenerator, QuantumGenerator, classical_analog
from langdiv.protocol import EnumerationConfig, InitialState, MeasurementProtocol, enumerate_language

__all__ = [
    "ClassicalGenerator",
    "DiversityReport",
    "EnumerationConfig",
    "FormalLanguage",
    "InitialState",
    "MeasurementProtocol",
    "QuantumGenerator",
    "StochasticLanguage",
    "SweepConfig",
    "classical_analog",
    "delta_similar",
    "enumerate_language",
    "pseudo_period",
    "support",
    "sweep",
]
