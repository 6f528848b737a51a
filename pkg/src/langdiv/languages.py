"""Finite-horizon stochastic languages and their formal supports.

Words are stored as tuples of alphabet symbols. String forms concatenate the
symbols when all of them are single characters and join with ``·`` otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping, Optional

from langdiv.errors import AlphabetMismatch, HorizonMismatch

SEPARATOR = "·"
KEY_DIGITS = 9


def format_word(word, alphabet) -> str:
    if all(len(s) == 1 for s in alphabet):
        return "".join(word)
    return SEPARATOR.join(word)


def parse_word(text: str, alphabet) -> tuple:
    if all(len(s) == 1 for s in alphabet):
        return tuple(text)
    return tuple(x for x in text.split(SEPARATOR) if x)


@dataclass(frozen=True, eq=False)
class StochasticLanguage:
    alphabet: tuple
    max_length: int
    words: Mapping[tuple, float]
    prune_threshold: float = 1e-12

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        ordered = {}
        index = {s: i for i, s in enumerate(self.alphabet)}
        for w in sorted(self.words, key=lambda w: (len(w), [index[s] for s in w])):
            ordered[tuple(w)] = float(self.words[w])
        object.__setattr__(self, "words", MappingProxyType(ordered))

    def prob(self, word) -> float:
        """Probability of ``word``; absent words (and anything past the horizon) give 0."""
        if isinstance(word, str):
            word = parse_word(word, self.alphabet)
        word = tuple(word)
        if not word:
            return 1.0
        return self.words.get(word, 0.0)

    def of_length(self, length: int) -> dict:
        return {w: p for w, p in self.words.items() if len(w) == length}

    def length_totals(self) -> list:
        totals = [0.0] * (self.max_length + 1)
        totals[0] = 1.0
        for w, p in self.words.items():
            totals[len(w)] += p
        return totals

    def normalization_error(self) -> float:
        """Largest deviation of a per-length total from 1."""
        return max((abs(t - 1.0) for t in self.length_totals()), default=0.0)

    def prefix_error(self) -> float:
        """Largest ``|Pr(w) - sum_y Pr(wy)|`` over words shorter than the horizon."""
        worst = 0.0
        prefixes = [()] + [w for w in self.words if len(w) < self.max_length]
        for w in prefixes:
            children = sum(self.prob(w + (y,)) for y in self.alphabet)
            worst = max(worst, abs(self.prob(w) - children))
        return worst

    def as_dict(self) -> dict:
        return {format_word(w, self.alphabet): p for w, p in self.words.items()}

    def __len__(self):
        return len(self.words)

    def __repr__(self):
        shown = ", ".join(f"{k}: {v:.6g}" for k, v in list(self.as_dict().items())[:6])
        more = ", ..." if len(self.words) > 6 else ""
        return f"StochasticLanguage(L<={self.max_length}, {{{shown}{more}}})"


@dataclass(frozen=True)
class FormalLanguage:
    alphabet: tuple
    max_length: int
    words: frozenset

    def __contains__(self, word):
        if isinstance(word, str):
            word = parse_word(word, self.alphabet)
        return tuple(word) in self.words

    def __len__(self):
        return len(self.words)

    def sorted_words(self) -> list:
        index = {s: i for i, s in enumerate(self.alphabet)}
        return sorted(self.words, key=lambda w: (len(w), [index[s] for s in w]))


def support(lang: StochasticLanguage) -> FormalLanguage:
    theta = lang.prune_threshold
    return FormalLanguage(
        lang.alphabet, lang.max_length, frozenset(w for w, p in lang.words.items() if p > theta)
    )


def is_subword_closed(lang: FormalLanguage) -> bool:
    """Every non-empty contiguous subword of every member is a member."""
    words = lang.words
    for w in words:
        n = len(w)
        for i in range(n):
            for j in range(i + 1, n + 1):
                if w[i:j] not in words:
                    return False
    return True


def _check_comparable(a: StochasticLanguage, b: StochasticLanguage):
    if a.alphabet != b.alphabet:
        raise AlphabetMismatch(f"alphabets differ: {a.alphabet} vs {b.alphabet}")
    if a.max_length != b.max_length:
        raise HorizonMismatch(f"horizons differ: {a.max_length} vs {b.max_length}")


def max_deviation(a: StochasticLanguage, b: StochasticLanguage) -> float:
    """Largest matched-word probability difference (absent words count as 0)."""
    _check_comparable(a, b)
    words = set(a.words) | set(b.words)
    return max((abs(a.prob(w) - b.prob(w)) for w in words), default=0.0)


def delta_similar(a: StochasticLanguage, b: StochasticLanguage, delta: float) -> bool:
    return max_deviation(a, b) <= delta


def _shift_period(words, limit: int) -> Optional[int]:
    for n in range(1, limit + 1):
        if all(w[i] == w[i + n] for w in words for i in range(len(w) - n)):
            return n
    return None


def detect_period(lang: StochasticLanguage) -> Optional[int]:
    """Smallest ``N <= max_length // 2`` for which every support word repeats with shift N.

    Only the support is inspected; probabilities are irrelevant.
    """
    words = list(support(lang).words)
    if not words:
        return None
    return _shift_period(words, lang.max_length // 2)


def canonical_key(lang: StochasticLanguage) -> tuple:
    """Hashable key; equal for languages that agree after rounding to 9 decimals."""
    items = []
    for w, p in lang.words.items():
        r = round(p, KEY_DIGITS)
        if r != 0.0:
            items.append((format_word(w, lang.alphabet), r))
    items.sort(key=lambda item: (len(parse_word(item[0], lang.alphabet)), item[0]))
    return (lang.alphabet, lang.max_length, tuple(items))


def support_key(lang: StochasticLanguage) -> tuple:
    return (lang.alphabet, lang.max_length, tuple(sorted(support(lang).words)))


def describe_support(lang: StochasticLanguage) -> str:
    """Regular-expression-style label for common supports (cosmetic)."""
    sup = support(lang)
    top = [w for w in sup.words if len(w) == lang.max_length]
    if not top:
        return "{}"
    k = len(lang.alphabet)
    if len(top) == k ** lang.max_length:
        return "(" + "+".join(lang.alphabet) + ")*"
    # labels may use a period up to max_length - 1 (weaker evidence than detect_period)
    period = _shift_period(top, lang.max_length - 1)
    if period is None:
        return f"{len(sup)} words"
    templates = {w[:period] for w in top}
    if period == 1:
        return " | ".join(f"{t[0]}*" for t in sorted(templates))
    if len(templates) == 1:
        (t,) = templates
        return f"({format_word(t, lang.alphabet)})*"
    rotations = {t[i:] + t[:i] for t in templates for i in range(period)}
    canon = {max(t[i:] + t[:i] for i in range(period)) for t in templates}
    if len(canon) == 1 and templates <= rotations:
        (t,) = canon
        return f"subw(({format_word(t, lang.alphabet)})*)"
    return " | ".join(f"({format_word(t, lang.alphabet)})*" for t in sorted(templates))
