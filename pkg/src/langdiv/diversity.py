"""Period sweeps, language diversity, pseudo-periods and diversity bounds."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
from scipy.sparse.csgraph import connected_components

from langdiv.errors import EmptySweep, NotUnitary
from langdiv.languages import (
    StochasticLanguage,
    canonical_key,
    delta_similar,
    support_key,
)
from langdiv.machines import Machine, QuantumGenerator, is_deterministic
from langdiv.matrix import (
    DEFAULT_POLICY,
    is_permutation_matrix,
    matrix_power,
    permutation_order,
    validate_unitary,
)
from langdiv.protocol import (
    EnumerationConfig,
    InitialState,
    MeasurementProtocol,
    enumerate_language,
)

ENSEMBLES = ("basis", "uniform", "basis_and_uniform", "components")
BOUND_SLACK = 1e-12


@dataclass(frozen=True)
class SweepConfig:
    p_max: int = 20
    ensemble: str = "basis"
    max_length: int = 8
    delta: float = DEFAULT_POLICY.language
    p_min: int = 1
    dedup: str = "key"
    prune_threshold: float = DEFAULT_POLICY.prune
    k_max: int = 64
    pseudo_tol: float = 1e-9
    jobs: int = 1

    def __post_init__(self):
        if self.ensemble not in ENSEMBLES:
            raise ValueError(f"ensemble must be one of {ENSEMBLES}, got {self.ensemble!r}")
        if self.dedup not in ("key", "delta"):
            raise ValueError("dedup must be 'key' or 'delta'")
        if self.p_min < 1:
            raise ValueError("periods start at 1")
        if self.delta < 0:
            raise ValueError("delta must be non-negative")

    @property
    def periods(self) -> range:
        return range(self.p_min, self.p_max + 1)


@dataclass
class SweepEntry:
    period: int
    initial: str
    class_index: int


@dataclass
class LanguageClass:
    language: StochasticLanguage
    key: tuple
    provenance: list = field(default_factory=list)

    @property
    def periods(self) -> list:
        return sorted({p for p, _ in self.provenance})


@dataclass(frozen=True)
class BoundCheck:
    kind: str  # "periodic" or "pseudo"
    m: int
    alphabet_size: int
    value: float
    diversity: float

    @property
    def passed(self) -> bool:
        return self.diversity <= self.value + BOUND_SLACK


@dataclass
class DiversityReport:
    machine_name: str
    config: SweepConfig
    entries: List[SweepEntry]
    classes: List[LanguageClass]
    n_formal: int
    pseudo_period: Optional[int]
    period: Optional[int]
    bounds: List[BoundCheck]
    warnings: List[str]

    @property
    def n_stoch(self) -> int:
        return len(self.classes)

    @property
    def d_stoch(self) -> float:
        return language_diversity(self)

    @property
    def d_formal(self) -> float:
        return formal_diversity(self)

    def language_at(self, period: int, initial: str) -> StochasticLanguage:
        for e in self.entries:
            if e.period == period and e.initial == initial:
                return self.classes[e.class_index].language
        raise KeyError((period, initial))


def language_diversity(report: DiversityReport) -> float:
    return math.log2(len(report.classes)) if report.classes else 0.0


def formal_diversity(report: DiversityReport) -> float:
    return math.log2(report.n_formal) if report.n_formal else 0.0


def diversity_bound(kind: str, m: int, alphabet_size: int) -> float:
    """``log2(|Y| + m(m-1))`` for a period (``periodic``) or pseudo-period (``pseudo``) ``m``."""
    if kind not in ("periodic", "pseudo"):
        raise ValueError(f"bound kind must be 'periodic' or 'pseudo', got {kind!r}")
    if m < 1 or alphabet_size < 1:
        raise ValueError("period and alphabet size must be positive")
    return math.log2(alphabet_size + m * (m - 1))


def pseudo_period(u, k_max: int = 64, eps: float = 1e-9) -> Optional[int]:
    """Smallest ``k <= k_max`` with ``U^k`` within ``eps`` of ``e^{i phi} I``.

    The phase is taken from the largest-modulus diagonal entry of ``U^k``.
    """
    u = np.asarray(u, dtype=np.complex128)
    if not validate_unitary(u, DEFAULT_POLICY.struct):
        raise NotUnitary("pseudo-period requires a unitary matrix")
    eye = np.eye(u.shape[0])
    power = np.eye(u.shape[0], dtype=np.complex128)
    for k in range(1, k_max + 1):
        power = power @ u
        d = np.diag(power)
        phase = d[np.argmax(np.abs(d))]
        phase = phase / abs(phase) if abs(phase) > 0 else 1.0
        if np.max(np.abs(power - phase * eye)) <= eps:
            return k
    return None


def closed_components(adjacency) -> list:
    """Closed communicating classes of a directed graph, each sorted, ordered by smallest member."""
    adj = np.asarray(adjacency, dtype=bool)
    n_comp, labels = connected_components(adj.astype(np.int8), directed=True, connection="strong")
    leaves = np.ones(n_comp, dtype=bool)
    src, dst = np.nonzero(adj)
    leaves[labels[src][labels[src] != labels[dst]]] = False
    classes = [tuple(int(i) for i in np.flatnonzero(labels == c)) for c in range(n_comp) if leaves[c]]
    return sorted(classes)


def period_skeleton(machine: Machine, period: int, tol: float = DEFAULT_POLICY.struct):
    """Boolean reachability matrix of the measured dynamics at ``period``.

    Classical machines use ``T^p``. Deterministic quantum machines use the
    support of ``|U^p|^2``. Returns None for non-deterministic quantum machines.
    """
    if isinstance(machine, QuantumGenerator):
        if not is_deterministic(machine, tol):
            return None
        return np.abs(matrix_power(np.asarray(machine.unitary), period)) ** 2 > tol
    return matrix_power(machine.state_transition, period) > tol


def ensemble_initials(machine: Machine, ensemble: str, period: int, warnings: list) -> list:
    n = machine.dim
    basis = [InitialState.basis(i) for i in range(n)]
    if ensemble == "basis":
        return basis
    if ensemble == "uniform":
        return [InitialState.uniform()]
    if ensemble == "basis_and_uniform":
        return basis + [InitialState.uniform()]
    skeleton = period_skeleton(machine, period)
    if skeleton is None:
        msg = ("components ensemble undefined for a non-deterministic quantum machine; "
               "using basis_and_uniform")
        if msg not in warnings:
            warnings.append(msg)
        return basis + [InitialState.uniform()]
    comps = closed_components(skeleton)
    if len(comps) == 1 and len(comps[0]) == n:
        return [InitialState.uniform()]
    return [InitialState.uniform(c) for c in comps]


def machine_period(machine: Machine) -> Optional[int]:
    """Order of the evolution operator when it is a 0/1 permutation matrix."""
    m = np.asarray(machine.unitary if isinstance(machine, QuantumGenerator) else machine.state_transition)
    if is_permutation_matrix(m) and np.allclose(m, np.abs(m), atol=DEFAULT_POLICY.struct):
        return permutation_order(m)
    return None


def sweep(machine: Machine, cfg: SweepConfig) -> DiversityReport:
    """Enumerate every (period, initial state) cell and deduplicate the languages."""
    if not cfg.periods:
        raise EmptySweep(f"empty period range {cfg.p_min}..{cfg.p_max}")
    warnings: list = []
    cells = [(p, init) for p in cfg.periods
             for init in ensemble_initials(machine, cfg.ensemble, p, warnings)]
    enum_cfg = EnumerationConfig(cfg.max_length, cfg.prune_threshold)

    def run(cell):
        p, init = cell
        return enumerate_language(machine, MeasurementProtocol(p, init), enum_cfg)

    if cfg.jobs > 1:
        with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
            languages = list(pool.map(run, cells))
    else:
        languages = [run(c) for c in cells]

    classes: List[LanguageClass] = []
    by_key = {}
    entries = []
    for (p, init), lang in zip(cells, languages):
        key = canonical_key(lang)
        idx = by_key.get(key)
        if idx is None and cfg.dedup == "delta":
            idx = next((i for i, c in enumerate(classes)
                        if delta_similar(c.language, lang, cfg.delta)), None)
        if idx is None:
            idx = len(classes)
            classes.append(LanguageClass(lang, key))
        by_key.setdefault(key, idx)
        classes[idx].provenance.append((p, init.describe()))
        entries.append(SweepEntry(p, init.describe(), idx))

    n_formal = len({support_key(c.language) for c in classes})

    k = None
    u = machine.unitary if isinstance(machine, QuantumGenerator) else machine.state_transition
    if validate_unitary(u, DEFAULT_POLICY.struct):
        k = pseudo_period(u, cfg.k_max, cfg.pseudo_tol)
    n_period = machine_period(machine)
    d = math.log2(len(classes))
    bounds = []
    y = len(machine.alphabet)
    if n_period is not None:
        bounds.append(BoundCheck("periodic", n_period, y, diversity_bound("periodic", n_period, y), d))
    if k is not None:
        bounds.append(BoundCheck("pseudo", k, y, diversity_bound("pseudo", k, y), d))
    elif isinstance(machine, QuantumGenerator):
        warnings.append(f"no pseudo-period found within k_max={cfg.k_max}")

    return DiversityReport(machine.name, cfg, entries, classes, n_formal, k, n_period, bounds, warnings)
