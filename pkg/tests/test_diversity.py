import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from langdiv import builtin
from langdiv.diversity import (
    SweepConfig,
    closed_components,
    diversity_bound,
    ensemble_initials,
    pseudo_period,
    sweep,
)
from langdiv.errors import EmptySweep, NotUnitary
from langdiv.languages import delta_similar
from langdiv.machines import QuantumGenerator, classical_analog

from strategies import random_qdgs


def probs(report):
    return sorted(
        sorted((w, round(p, 9)) for w, p in c.language.words.items()) for c in report.classes
    )


class TestSweepExamples:
    def test_beam_splitter(self, beam_splitter):
        rep = sweep(beam_splitter, SweepConfig())
        assert rep.n_stoch == 3
        assert rep.d_stoch == pytest.approx(math.log2(3), abs=1e-12)
        assert rep.language_at(1, "basis:0").prob("0101") == pytest.approx(1 / 16, abs=1e-12)
        assert rep.language_at(2, "basis:0").prob("0000") == pytest.approx(1.0, abs=1e-12)
        assert rep.language_at(2, "basis:1").prob("1111") == pytest.approx(1.0, abs=1e-12)

    def test_beam_splitter_analog(self, beam_splitter):
        rep = sweep(classical_analog(beam_splitter), SweepConfig())
        assert rep.n_stoch == 1 and rep.d_stoch == 0.0

    def test_kicked_top_counts(self, kicked_top):
        assert sweep(kicked_top, SweepConfig()).n_stoch == 5
        assert sweep(kicked_top, SweepConfig(ensemble="components")).n_stoch == 4

    @pytest.mark.parametrize("template, n", [("10000", 3), ("11000", 4), ("10101", 4)])
    def test_period5(self, template, n):
        rep = sweep(builtin.period5(template), SweepConfig(ensemble="components"))
        assert rep.n_stoch == n
        assert rep.n_formal == n
        assert rep.period == 5 and rep.pseudo_period == 5

    def test_single_period(self, beam_splitter):
        rep = sweep(beam_splitter, SweepConfig(p_min=2, p_max=2))
        assert rep.n_stoch == 2

    def test_empty_range(self, beam_splitter):
        with pytest.raises(EmptySweep):
            sweep(beam_splitter, SweepConfig(p_min=5, p_max=4))

    def test_bad_config(self):
        with pytest.raises(ValueError):
            SweepConfig(ensemble="everything")
        with pytest.raises(ValueError):
            SweepConfig(dedup="fuzzy")


class TestBounds:
    def test_values(self):
        assert diversity_bound("pseudo", 2, 2) == pytest.approx(2.0)
        assert diversity_bound("pseudo", 4, 2) == pytest.approx(math.log2(14))
        assert diversity_bound("periodic", 5, 2) == pytest.approx(math.log2(22))

    def test_bad_kind(self):
        with pytest.raises(ValueError):
            diversity_bound("chaotic", 2, 2)

    def test_reports_carry_bounds(self, p10000):
        rep = sweep(p10000, SweepConfig(ensemble="components"))
        kinds = {b.kind for b in rep.bounds}
        assert kinds == {"periodic", "pseudo"}
        assert all(b.passed for b in rep.bounds)


class TestPseudoPeriod:
    def test_hadamard(self, hadamard):
        assert pseudo_period(hadamard) == 2

    @pytest.mark.parametrize("phase", [0.0, 0.5, 1.3, 2.9])
    def test_kicked_top(self, phase):
        assert pseudo_period(builtin.kicked_top_unitary(phase)) == 4

    def test_permutation(self):
        assert pseudo_period(builtin.PERIOD5_PERMUTATION) == 5

    def test_identity(self):
        assert pseudo_period(np.eye(3)) == 1

    def test_irrational_rotation_not_found(self):
        a = 1.0
        u = np.array([[np.cos(a), -np.sin(a)], [np.sin(a), np.cos(a)]])
        assert pseudo_period(u, k_max=64) is None

    def test_not_unitary(self):
        with pytest.raises(NotUnitary):
            pseudo_period([[1, 1], [0, 1]])

    def test_phase_only_differs(self, hadamard):
        assert pseudo_period(np.exp(0.7j) * hadamard) == 2


class TestComponents:
    def test_two_cycles(self):
        adj = np.zeros((4, 4), dtype=bool)
        adj[0, 1] = adj[1, 0] = adj[2, 3] = adj[3, 2] = True
        assert closed_components(adj) == [(0, 1), (2, 3)]

    def test_transient_excluded(self):
        adj = np.array([[0, 1, 0], [0, 1, 0], [0, 0, 1]], dtype=bool)
        assert closed_components(adj) == [(1,), (2,)]

    def test_kicked_top_initials(self, kicked_top):
        w = []
        assert [i.describe() for i in ensemble_initials(kicked_top, "components", 4, w)] == \
            ["uniform:{0}", "uniform:{1}"]
        assert [i.describe() for i in ensemble_initials(kicked_top, "components", 1, w)] == ["uniform"]
        assert not w

    def test_non_deterministic_falls_back(self):
        u = np.array([[1, 0, 1], [0, np.sqrt(2), 0], [1, 0, -1]]) / np.sqrt(2)
        q = QuantumGenerator.from_partition(u, {"a": [0, 2], "b": [1]})
        w = []
        inits = ensemble_initials(q, "components", 1, w)
        assert len(inits) == 4 and w


def test_formal_never_exceeds_stochastic(kicked_top, beam_splitter):
    for m in (kicked_top, beam_splitter, builtin.period5("11000")):
        for ens in ("basis", "components", "uniform"):
            rep = sweep(m, SweepConfig(ensemble=ens))
            assert rep.d_formal <= rep.d_stoch + 1e-12


@settings(max_examples=20)
@given(random_qdgs(), st.sampled_from(["basis", "uniform", "components"]))
def test_languages_repeat_with_pseudo_period(q, ensemble):
    k = pseudo_period(q.unitary)
    if k is None or k > 6:
        return
    rep = sweep(q, SweepConfig(p_max=3 * k, ensemble=ensemble, max_length=5))
    for e in rep.entries:
        if e.period + k <= 3 * k:
            try:
                later = rep.language_at(e.period + k, e.initial)
            except KeyError:
                continue
            assert delta_similar(rep.classes[e.class_index].language, later, 1e-9)


@settings(max_examples=15)
@given(random_qdgs())
def test_no_new_classes_after_first_pseudo_periods(q):
    k = pseudo_period(q.unitary)
    if k is None or k > 6:
        return
    short = sweep(q, SweepConfig(p_max=k, max_length=5))
    long = sweep(q, SweepConfig(p_max=4 * k, max_length=5))
    assert short.n_stoch == long.n_stoch


def test_parallel_sweep_is_deterministic(kicked_top):
    a = sweep(kicked_top, SweepConfig(ensemble="basis_and_uniform"))
    b = sweep(kicked_top, SweepConfig(ensemble="basis_and_uniform", jobs=4))
    assert [(e.period, e.initial, e.class_index) for e in a.entries] == \
        [(e.period, e.initial, e.class_index) for e in b.entries]
    assert [c.key for c in a.classes] == [c.key for c in b.classes]


def test_delta_dedup_merges_close_languages(beam_splitter):
    a = sweep(beam_splitter, SweepConfig(dedup="delta", delta=0.6, max_length=1))
    b = sweep(beam_splitter, SweepConfig(max_length=1))
    assert b.n_stoch == 3
    assert a.n_stoch < b.n_stoch


@pytest.mark.parametrize("template", ["10000", "11000", "10101"])
def test_period5_quantum_and_classical_agree(template):
    q = builtin.period5(template)
    cfg = SweepConfig(ensemble="components")
    assert probs(sweep(q, cfg)) == probs(sweep(classical_analog(q), cfg))
