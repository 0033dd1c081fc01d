"""Predicates for the named classes of multioperations and the chi-triple case split."""

from __future__ import annotations

import enum
from typing import NamedTuple

import numpy as np

from .core import (
    MultiOp,
    coordinates,
    elements,
    identify,
    index_tuple,
    make_projection,
    minors,
    repeated_tuples,
)


def is_projection(f: MultiOp) -> int | None:
    """Coordinate i with f = e^n_i, else None."""
    for i in range(1, f.arity + 1):
        if f == make_projection(f.universe, f.arity, i):
            return i
    return None


def is_idempotent(f: MultiOp) -> bool:
    k = f.k
    step = sum(k**t for t in range(f.arity))
    return all(f.table[a * step] == 1 << a for a in range(k))


def _pattern(f: MultiOp, pattern: tuple[int, int, int], result: int) -> bool:
    """Check f(pattern) = {result} for all (x, y); positions name variables 0 = x, 1 = y."""
    if f.arity != 3:
        raise ValueError("ternary multioperation required")
    k = f.k
    for x in range(k):
        for y in range(k):
            v = (x, y)
            a, b, c = (v[p] for p in pattern)
            if f.table[(a * k + b) * k + c] != 1 << v[result]:
                return False
    return True


def is_majority(f: MultiOp) -> bool:
    return _pattern(f, (0, 0, 1), 0) and _pattern(f, (0, 1, 0), 0) and _pattern(f, (1, 0, 0), 0)


def is_minority(f: MultiOp) -> bool:
    return _pattern(f, (0, 0, 1), 1) and _pattern(f, (0, 1, 0), 1) and _pattern(f, (1, 0, 0), 1)


def is_maltsev(f: MultiOp) -> bool:
    # f(x,x,y) = {y} = f(y,x,x)
    return _pattern(f, (0, 0, 1), 1) and _pattern(f, (1, 0, 0), 1)


def is_pixley(f: MultiOp) -> bool:
    return is_maltsev(f) and _pattern(f, (0, 1, 0), 0)


def is_semiprojection(f: MultiOp) -> int | None:
    """Coordinate i such that f(a) = {a_i} on every tuple with a repeated entry."""
    n = f.arity
    if n < 3:
        raise ValueError("semiprojections have arity >= 3")
    k = f.k
    rep = repeated_tuples(k, n)
    vals = f.array[rep]
    hits = [
        i for i in range(1, n + 1)
        if np.array_equal(vals, np.left_shift(1, coordinates(k, n)[i - 1][rep]).astype(np.uint8))
    ]
    # tuples (a, a, b, ...) separate coordinates once n >= 3 and k >= 2
    assert len(hits) <= 1, f"semiprojection coordinate is not unique: {hits}"
    return hits[0] if hits else None


class ChiTriple(NamedTuple):
    a: int
    b: int
    c: int

    def __str__(self):
        return f"{self.a}{self.b}{self.c}"

    @classmethod
    def parse(cls, text: str) -> ChiTriple:
        digits = tuple(int(ch) for ch in str(text))
        if len(digits) != 3 or not set(digits) <= {1, 2}:
            raise ValueError(f"bad chi triple {text!r}")
        return cls(*digits)


class TernaryCase(str, enum.Enum):
    SEMIPROJECTION = "semiprojection"
    MAJORITY = "majority"
    MINORITY = "minority"
    PIXLEY = "pixley"
    CASE121 = "case121"
    CASE222 = "case222"


_CASES = {
    "111": TernaryCase.SEMIPROJECTION,
    "122": TernaryCase.SEMIPROJECTION,
    "212": TernaryCase.SEMIPROJECTION,
    "112": TernaryCase.MAJORITY,
    "221": TernaryCase.MINORITY,
    "211": TernaryCase.PIXLEY,
    "121": TernaryCase.CASE121,
    "222": TernaryCase.CASE222,
}


def chi_triple(f: MultiOp) -> ChiTriple | None:
    """Which projections the minors f(x1,x1,x2), f(x1,x2,x1), f(x1,x2,x2) equal."""
    if f.arity != 3:
        raise ValueError("chi_triple needs a ternary multioperation")
    out = []
    for i, j in ((1, 2), (1, 3), (2, 3)):
        p = is_projection(identify(f, i, j))
        if p is None:
            return None
        out.append(p)
    return ChiTriple(*out)


def classify_chi(t: ChiTriple) -> TernaryCase:
    return _CASES[str(ChiTriple(*t))]


def is_totally_symmetric(f: MultiOp) -> bool:
    from .core import isomer

    n = f.arity
    # adjacent transpositions generate the symmetric group
    for t in range(1, n):
        perm = list(range(1, n + 1))
        perm[t - 1], perm[t] = perm[t], perm[t - 1]
        if isomer(f, perm) != f:
            return False
    return True


class SemiprojectionCounterexample(NamedTuple):
    tuple: tuple[int, ...]
    value: frozenset[int]
    coordinate: int


def semiprojection_check(f: MultiOp) -> int | SemiprojectionCounterexample:
    """Semiprojection coordinate of f, given all identification minors are projections.

    Returns a counterexample when f disagrees with that coordinate on a tuple
    with a repeated entry. Raises ValueError when some minor is not a projection.
    """
    n = f.arity
    if n < 4:
        raise ValueError("the check needs arity >= 4")
    for (i, j), g in minors(f):
        if is_projection(g) is None:
            raise ValueError(f"minor identifying x{i} and x{j} is not a projection")
    k = f.k
    rep = repeated_tuples(k, n)
    c = coordinates(k, n)
    first = None
    for coord in range(1, n + 1):
        want = np.left_shift(1, c[coord - 1]).astype(np.uint8)
        bad = np.flatnonzero(rep & (f.array != want))
        if not len(bad):
            return coord
        if first is None:
            first = (int(bad[0]), coord)
    idx, coord = first
    return SemiprojectionCounterexample(index_tuple(k, n, idx), frozenset(elements(f.table[idx])), coord)
