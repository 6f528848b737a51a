import json

import numpy as np
import pytest
from hypothesis import given

from langdiv import builtin
from langdiv.errors import MachineSyntaxError, ValidationError
from langdiv.io import language_to_dict, machine_to_dict, parse_machine, serialize_machine
from langdiv.machines import ClassicalGenerator, QuantumGenerator, classical_analog
from langdiv.protocol import EnumerationConfig, InitialState, MeasurementProtocol, enumerate_language

from strategies import random_qdgs


def roundtrip(m):
    return parse_machine(serialize_machine(m))


@given(random_qdgs())
def test_quantum_roundtrip(q):
    back = roundtrip(q)
    assert isinstance(back, QuantumGenerator)
    assert np.max(np.abs(np.asarray(back.unitary) - np.asarray(q.unitary))) <= 1e-15
    assert back.partition == q.partition
    assert back.alphabet == q.alphabet


@given(random_qdgs())
def test_classical_roundtrip(q):
    g = classical_analog(q)
    back = roundtrip(g)
    assert back.has_factorization
    for y in g.alphabet:
        assert np.max(np.abs(back.symbol_matrix(y) - g.symbol_matrix(y))) <= 1e-15


def test_unfactorized_roundtrip():
    g = builtin.fair_coin_one_state()
    back = roundtrip(g)
    assert not back.has_factorization
    assert back.symbol_matrix("1").tolist() == [[0.5]]


def test_one_row_per_line():
    text = serialize_machine(builtin.period5("10000"))
    assert sum(1 for line in text.splitlines() if line.strip().startswith("[{")) == 5


def _quantum_doc(**over):
    doc = machine_to_dict(builtin.beam_splitter())
    doc.update(over)
    return doc


def test_overlapping_projectors():
    with pytest.raises(ValidationError, match="assigned to both"):
        parse_machine(json.dumps(_quantum_doc(projectors={"0": [0, 1], "1": [1]})))


def test_incomplete_cover():
    with pytest.raises(ValidationError):
        parse_machine(json.dumps(_quantum_doc(projectors={"0": [0], "1": []})))


def test_non_unitary():
    doc = _quantum_doc(unitary=[[1, 1], [0, 1]])
    with pytest.raises(ValidationError, match="row 0"):
        parse_machine(json.dumps(doc))


def test_classical_row_sum():
    doc = {"kind": "classical", "alphabet": ["0", "1"],
           "transition": [[0.5, 0.4], [0.5, 0.5]], "projectors": {"0": [0], "1": [1]}}
    with pytest.raises(ValidationError, match="row 0"):
        parse_machine(json.dumps(doc))


def test_missing_field():
    with pytest.raises(ValidationError, match="alphabet"):
        parse_machine('{"kind": "quantum"}')


def test_syntax_error_position():
    with pytest.raises(MachineSyntaxError) as info:
        parse_machine('{\n  "kind": "quantum",\n  "alphabet": [0 1]\n}')
    assert info.value.line == 3
    assert info.value.column > 1


def test_language_json_schema(beam_splitter):
    lang = enumerate_language(beam_splitter, MeasurementProtocol(2, InitialState.basis(1)), EnumerationConfig(3))
    doc = language_to_dict(lang, 2, "basis:1")
    assert doc == {
        "alphabet": ["0", "1"], "max_length": 3, "period": 2, "initial": "basis:1",
        "words": [{"w": "1", "p": pytest.approx(1.0)}, {"w": "11", "p": pytest.approx(1.0)},
                  {"w": "111", "p": pytest.approx(1.0)}],
    }


def test_explicit_symbol_matrices_validated():
    doc = {"kind": "classical", "alphabet": ["a"], "symbol_matrices": {"a": [[0.9]]}}
    with pytest.raises(ValidationError):
        parse_machine(json.dumps(doc))
    assert isinstance(parse_machine(json.dumps({**doc, "symbol_matrices": {"a": [[1.0]]}})), ClassicalGenerator)
