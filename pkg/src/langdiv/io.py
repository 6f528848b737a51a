"""JSON machine files and language/report serialization.

Machine file layout::

    {"kind": "quantum", "name": "...", "states": [...], "alphabet": ["0", "1"],
     "unitary": [[{"re": 0.7071, "im": 0.0}, ...], ...],
     "projectors": {"0": [0], "1": [1]}}

    {"kind": "classical", "states": [...], "alphabet": [...],
     "symbol_matrices": {"0": [[...]], "1": [[...]]}}          # or
    {"kind": "classical", ..., "transition": [[...]], "projectors": {"0": [...], ...}}

Matrices are row-major. Projectors are lists of basis-state indices.
"""

import json

import numpy as np

from langdiv.errors import DimensionMismatch, MachineSyntaxError, ValidationError
from langdiv.languages import StochasticLanguage, format_word
from langdiv.machines import ClassicalGenerator, QuantumGenerator, build_projectors, partition_of


def _require(doc, name, kind):
    if name not in doc:
        raise ValidationError(f"{name}: required field missing")
    value = doc[name]
    if not isinstance(value, kind):
        raise ValidationError(f"{name}: expected {kind.__name__}")
    return value


def _complex_entry(x, where):
    if isinstance(x, dict):
        extra = set(x) - {"re", "im"}
        if extra or "re" not in x:
            raise ValidationError(f"{where}: complex entries need 're' and optional 'im' only")
        re, im = x["re"], x.get("im", 0.0)
    else:
        re, im = x, 0.0
    for part in (re, im):
        if isinstance(part, bool) or not isinstance(part, (int, float)):
            raise ValidationError(f"{where}: expected a number, got {part!r}")
    return complex(re, im)


def _real_entry(x, where):
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ValidationError(f"{where}: expected a number, got {x!r}")
    return float(x)


def _matrix(rows, where, entry):
    if not isinstance(rows, list) or not rows:
        raise ValidationError(f"{where}: expected a non-empty list of rows")
    n = len(rows)
    out = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise ValidationError(f"{where}[{i}]: expected a row of length {n}")
        out.append([entry(x, f"{where}[{i}][{j}]") for j, x in enumerate(row)])
    return np.array(out)


def _partition(doc, where):
    if not isinstance(doc, dict):
        raise ValidationError(f"{where}: expected an object mapping symbols to index lists")
    out = {}
    for sym, idx in doc.items():
        if not isinstance(idx, list) or not all(isinstance(i, int) and not isinstance(i, bool) for i in idx):
            raise ValidationError(f"{where}.{sym}: expected a list of integer state indices")
        out[sym] = idx
    return out


def machine_from_dict(doc: dict):
    if not isinstance(doc, dict):
        raise ValidationError("top level: expected an object")
    kind = _require(doc, "kind", str)
    alphabet = _require(doc, "alphabet", list)
    states = doc.get("states")
    name = doc.get("name", kind)
    if states is not None and not isinstance(states, list):
        raise ValidationError("states: expected a list of names")
    if kind == "quantum":
        u = _matrix(_require(doc, "unitary", list), "unitary", _complex_entry)
        partition = _partition(_require(doc, "projectors", dict), "projectors")
        _check_partition_symbols(partition, alphabet)
        projectors = build_projectors(partition, u.shape[0])
        dev = np.abs(u @ u.conj().T - np.eye(u.shape[0]))
        norms = np.abs(np.sum(np.abs(u) ** 2, axis=1) - 1.0)
        bad = np.flatnonzero(norms > 1e-9)
        if bad.size:
            raise ValidationError(f"row {int(bad[0])} of unitary not unit-norm")
        if dev.max() > 1e-9:
            raise ValidationError("rows of unitary are not orthogonal")
        return QuantumGenerator(states, alphabet, u, projectors, name=name)
    if kind == "classical":
        if "symbol_matrices" in doc:
            mats_doc = _require(doc, "symbol_matrices", dict)
            mats = {s: _matrix(m, f"symbol_matrices.{s}", _real_entry) for s, m in mats_doc.items()}
            return ClassicalGenerator(states, alphabet, mats, name=name)
        t = _matrix(_require(doc, "transition", list), "transition", _real_entry)
        partition = _partition(_require(doc, "projectors", dict), "projectors")
        _check_partition_symbols(partition, alphabet)
        sums = t.sum(axis=1)
        bad = np.flatnonzero(np.abs(sums - 1.0) > 1e-9)
        if bad.size:
            raise ValidationError(f"row {int(bad[0])} of transition sums to {sums[bad[0]]:.12g}, not 1")
        return ClassicalGenerator.from_factorization(t, partition, states=states, alphabet=alphabet, name=name)
    raise ValidationError(f"kind: expected 'quantum' or 'classical', got {kind!r}")


def _check_partition_symbols(partition, alphabet):
    if set(partition) != set(alphabet):
        raise ValidationError("projectors: keys must be exactly the alphabet symbols")


def parse_machine(text: str):
    """Parse and validate a machine file; raises MachineSyntaxError or ValidationError."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MachineSyntaxError(exc.msg, exc.lineno, exc.colno) from None
    try:
        return machine_from_dict(doc)
    except DimensionMismatch as exc:
        raise ValidationError(str(exc)) from None


def _complex_json(z: complex) -> dict:
    return {"re": float(z.real), "im": float(z.imag)}


def machine_to_dict(machine) -> dict:
    doc = {
        "kind": "quantum" if isinstance(machine, QuantumGenerator) else "classical",
        "name": machine.name,
        "states": list(machine.states),
        "alphabet": list(machine.alphabet),
    }
    if isinstance(machine, QuantumGenerator):
        doc["unitary"] = [[_complex_json(z) for z in row] for row in machine.unitary]
        doc["projectors"] = {s: list(v) for s, v in machine.partition.items()}
    elif machine.has_factorization:
        doc["transition"] = np.asarray(machine.transition, dtype=float).tolist()
        doc["projectors"] = {s: list(v) for s, v in partition_of(machine.projectors).items()}
    else:
        doc["symbol_matrices"] = {
            s: np.asarray(m, dtype=float).tolist() for s, m in machine.symbol_matrices.items()
        }
    return doc


def _dump_value(value, indent: str) -> str:
    if isinstance(value, list) and value and isinstance(value[0], list):
        rows = [indent + "  " + json.dumps(row) for row in value]
        return "[\n" + ",\n".join(rows) + "\n" + indent + "]"
    if isinstance(value, dict) and any(isinstance(v, list) and v and isinstance(v[0], list)
                                       for v in value.values()):
        inner = indent + "  "
        items = [f"{inner}{json.dumps(k)}: {_dump_value(v, inner)}" for k, v in value.items()]
        return "{\n" + ",\n".join(items) + "\n" + indent + "}"
    return json.dumps(value)


def serialize_machine(machine) -> str:
    """JSON text with one matrix row per line."""
    doc = machine_to_dict(machine)
    items = [f"  {json.dumps(k)}: {_dump_value(v, '  ')}" for k, v in doc.items()]
    return "{\n" + ",\n".join(items) + "\n}\n"


def language_to_dict(lang: StochasticLanguage, period=None, initial=None) -> dict:
    return {
        "alphabet": list(lang.alphabet),
        "max_length": lang.max_length,
        "period": period,
        "initial": initial,
        "words": [{"w": format_word(w, lang.alphabet), "p": p} for w, p in lang.words.items()],
    }
