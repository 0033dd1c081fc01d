"""Composition of multioperations, fixed-arity closure, and Boolean-group clones."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import product
from typing import Iterator, Sequence

import numpy as np

from .core import (
    LOG2,
    MAX_ARITY,
    POPCOUNT,
    MultiOp,
    Universe,
    as_universe,
    coordinates,
    is_operation,
    make_constant,
    projections,
)

log = logging.getLogger(__name__)

DEFAULT_LIMIT = 1_000_000
# operand bytes gathered per batch
_BATCH_BYTES = 1 << 22


def apply_batch(f: np.ndarray, k: int, operands: Sequence[np.ndarray]) -> np.ndarray:
    """Compose table ``f`` (arity m = len(operands)) with m stacks of operand rows.

    Each operand has shape (B, L); the result has shape (B, L) and row b is
    ``compose(f, [operands[0][b], ..., operands[m-1][b]])``.
    """
    m = len(operands)
    if all((POPCOUNT[g] == 1).all() for g in operands):
        idx = np.zeros(operands[0].shape, dtype=np.int64)
        for g in operands:
            idx *= k
            idx += LOG2[g]
        return f[idx]
    out = np.zeros(operands[0].shape, dtype=np.uint8)
    for pos, u in enumerate(product(range(k), repeat=m)):
        val = f[pos]
        if not val:
            continue
        hit = (operands[0] >> u[0]) & 1
        for t in range(1, m):
            hit &= (operands[t] >> u[t]) & 1
        out |= hit.astype(np.uint8) * val
    return out


def compose(f: MultiOp, gs: Sequence[MultiOp]) -> MultiOp:
    """Union-semantics superposition f(g_1, ..., g_i) of i multioperations of equal arity."""
    if len(gs) != f.arity:
        raise ValueError(f"need {f.arity} inner operations, got {len(gs)}")
    if not gs:
        raise ValueError("nothing to compose")
    j = gs[0].arity
    for g in gs:
        if g.universe != f.universe:
            raise ValueError("universe mismatch")
        if g.arity != j:
            raise ValueError("inner operations must share one arity")
    res = apply_batch(f.array, f.k, [g.array[None, :] for g in gs])
    return MultiOp(f.universe, j, res[0])


@dataclass(frozen=True)
class GeneratorSet:
    universe: Universe
    gens: tuple[MultiOp, ...] = ()
    names: tuple[str, ...] | None = None

    def __post_init__(self):
        u = as_universe(self.universe)
        object.__setattr__(self, "universe", u)
        gens = tuple(self.gens)
        object.__setattr__(self, "gens", gens)
        for g in gens:
            if g.universe != u:
                raise ValueError("all generators must share the universe")
        names = self.names
        if names is None:
            names = tuple(f"g{i}" for i in range(len(gens)))
        names = tuple(names)
        if len(names) != len(gens):
            raise ValueError("one name per generator")
        if len(set(names)) != len(names):
            raise ValueError("generator names must be unique")
        object.__setattr__(self, "names", names)

    def __iter__(self):
        return iter(self.gens)

    def __len__(self):
        return len(self.gens)

    def items(self):
        return zip(self.names, self.gens)


@dataclass(frozen=True)
class CloneFragment:
    universe: Universe
    arity: int
    members: tuple[MultiOp, ...]
    saturated: bool
    exact: bool = True
    _index: frozenset = field(default=frozenset(), repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", frozenset(m.table for m in self.members))

    def __contains__(self, f: MultiOp) -> bool:
        return f.universe == self.universe and f.arity == self.arity and f.table in self._index

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    @property
    def tables(self) -> frozenset:
        return self._index

    def as_generator_set(self) -> GeneratorSet:
        from .classifiers import is_projection

        names = []
        for i, f in enumerate(self.members):
            p = is_projection(f)
            names.append(f"e{self.arity}_{p}" if p else f"f{i}")
        return GeneratorSet(self.universe, self.members, tuple(names))


def _tuple_blocks(ranges: list[np.ndarray], chunk: int) -> Iterator[np.ndarray]:
    """Yield (B, m) index arrays covering the product of ``ranges`` in lexicographic order."""
    if any(len(r) == 0 for r in ranges):
        return
    if len(ranges) == 1:
        r = ranges[0]
        for s in range(0, len(r), chunk):
            yield r[s : s + chunk, None]
        return
    tail = 1
    for r in ranges[1:]:
        tail *= len(r)
    head = ranges[0]
    if tail > chunk:
        for a in head:
            for block in _tuple_blocks(ranges[1:], chunk):
                yield np.concatenate([np.full((len(block), 1), a, dtype=block.dtype), block], axis=1)
        return
    step = max(1, chunk // tail)
    for s in range(0, len(head), step):
        grid = np.meshgrid(head[s : s + step], *ranges[1:], indexing="ij")
        yield np.stack([g.ravel() for g in grid], axis=1)


def is_partial_family(gens) -> bool:
    """True iff every value of every generator has at most one element."""
    return all(bool((POPCOUNT[g.array] <= 1).all()) for g in gens)


def _saturate(u: Universe, arities: Sequence[int], static_outers, dynamic: bool, limit: int):
    """Semi-naive fixpoint over the given target arities.

    ``static_outers`` are (arity, table) pairs applied in every round; with
    ``dynamic`` every member found so far is also used as an outer function.
    Returns ({arity: sorted table bytes}, saturated).
    """
    k = u.size
    rows = {n: sorted(p.table for p in projections(u, n)) for n in arities}
    index = {n: {b: i for i, b in enumerate(rows[n])} for n in arities}
    lo = {n: 0 for n in arities}
    hi = {n: len(rows[n]) for n in arities}

    def stack(n):
        return np.frombuffer(b"".join(rows[n]), dtype=np.uint8).reshape(len(rows[n]), k**n)

    stacked = {n: stack(n) for n in arities}
    saturated = True

    def absorb(n, res) -> bool:
        for row in np.unique(res, axis=0):
            b = row.tobytes()
            if b not in index[n]:
                if len(rows[n]) >= limit:
                    return False
                index[n][b] = len(rows[n])
                rows[n].append(b)
        return True

    def blocks(m, n, everything):
        chunk = max(1, _BATCH_BYTES // k**n)
        if everything:
            yield from _tuple_blocks([np.arange(0, hi[n])] * m, chunk)
            return
        for p in range(m):
            ranges = [np.arange(0, lo[n])] * p + [np.arange(lo[n], hi[n])] + [np.arange(0, hi[n])] * (m - p - 1)
            yield from _tuple_blocks(ranges, chunk)

    while saturated and any(lo[n] < hi[n] for n in arities):
        outers = [(m, t, False) for m, t in static_outers]
        if dynamic:
            for i in arities:
                outers += [(i, stacked[i][r], r >= lo[i]) for r in range(hi[i])]
        for m, table, fresh in outers:
            for n in arities:
                for block in blocks(m, n, fresh):
                    res = apply_batch(table, k, [stacked[n][block[:, t]] for t in range(m)])
                    if not absorb(n, res):
                        saturated = False
                        break
                if not saturated:
                    break
            if not saturated:
                break
        for n in arities:
            # canonical order within the new block keeps later rounds deterministic
            rows[n][hi[n]:] = sorted(rows[n][hi[n]:])
            for i in range(hi[n], len(rows[n])):
                index[n][rows[n][i]] = i
            lo[n], hi[n] = hi[n], len(rows[n])
            stacked[n] = stack(n)
    return {n: sorted(rows[n]) for n in arities}, saturated


def close_fixed_arity(gens: GeneratorSet, n: int, limit: int = DEFAULT_LIMIT,
                      span: int | None = None) -> CloneFragment:
    """Arity-n slice of the multiclone generated by ``gens``.

    When every generator value has at most one element, the slice is the
    least set of n-ary members containing the projections and closed under
    applying each generator, and the restriction e^2_1, to tuples of members.
    This is exact. Otherwise composition is not associative and the closure
    runs jointly over arities 1..span with every member acting as an outer
    function; the result is then flagged ``exact=False``.

    Stops early, unsaturated, once some fragment would exceed ``limit`` members.
    """
    return _close(gens, n, limit, span)[n]


def close_joint(gens: GeneratorSet, span: int, limit: int = DEFAULT_LIMIT) -> dict[int, CloneFragment]:
    """Fragments 1..span of the closure under all compositions among arities <= span."""
    if not 1 <= span <= MAX_ARITY:
        raise ValueError(f"span must be in 1..{MAX_ARITY}")
    u = gens.universe
    tables, saturated = _saturate(u, range(1, span + 1), [(g.arity, g.array) for g in gens], True, limit)
    return {
        m: CloneFragment(u, m, tuple(MultiOp(u, m, b) for b in rows), saturated, exact=False)
        for m, rows in tables.items()
    }


def _close(gens: GeneratorSet, n: int, limit: int, span: int | None) -> dict[int, CloneFragment]:
    u = gens.universe
    if not 1 <= n <= MAX_ARITY:
        raise ValueError(f"arity must be in 1..{MAX_ARITY}")
    if limit < n:
        raise ValueError("limit must be at least the arity")
    if not is_partial_family(gens):
        width = max([n, span or 0] + [g.arity for g in gens if g.arity <= MAX_ARITY])
        return close_joint(gens, width, limit)
    outers = [(g.arity, g.array) for g in gens]
    if not all(is_operation(g) for g in gens):
        # e^2_1(x, y) restricts x to the domain of y
        outers.append((2, projections(u, 2)[0].array))
    tables, saturated = _saturate(u, [n], outers, False, limit)
    if not saturated:
        log.info("closure at arity %d stopped at limit %d", n, limit)
    return {n: CloneFragment(u, n, tuple(MultiOp(u, n, b) for b in tables[n]), saturated)}


def fragment_equals_projections(frag: CloneFragment) -> bool:
    if not frag.saturated:
        raise ValueError(f"fragment at arity {frag.arity} is unsaturated; equality is indeterminate")
    return frag.tables == frozenset(p.table for p in projections(frag.universe, frag.arity))


class ClosureLimitExceeded(Exception):
    """A closure needed for a decision stopped at its member limit."""

    def __init__(self, fragment: CloneFragment, reason: str = ""):
        self.fragment = fragment
        msg = f"closure at arity {fragment.arity} hit the member limit ({len(fragment)} members)"
        super().__init__(f"{msg}: {reason}" if reason else msg)


class LazyClone:
    """Per-arity fragments of [gens], computed on first request and cached.

    For generators with multi-valued entries all arities up to ``span`` are
    closed together on first use.
    """

    def __init__(self, gens: GeneratorSet, limit: int = DEFAULT_LIMIT, span: int | None = None):
        self.gens = gens
        self.limit = limit
        self.span = span
        self.fragments: dict[int, CloneFragment] = {}

    @property
    def universe(self) -> Universe:
        return self.gens.universe

    def fragment(self, n: int) -> CloneFragment:
        if n not in self.fragments:
            for m, frag in _close(self.gens, n, max(self.limit, n), self.span).items():
                self.fragments.setdefault(m, frag)
        return self.fragments[n]

    @property
    def exact(self) -> bool:
        return is_partial_family(self.gens)

    def saturated(self, n: int) -> CloneFragment:
        frag = self.fragment(n)
        if not frag.saturated:
            raise ClosureLimitExceeded(frag)
        return frag


# --- Boolean groups ---------------------------------------------------------

@dataclass(frozen=True)
class BooleanGroup:
    """A group <A; +, 0> with a + a = 0 for every a; ``add[a][b]`` is a + b."""

    universe: Universe
    zero: int
    add: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        u = as_universe(self.universe)
        object.__setattr__(self, "universe", u)
        add = tuple(tuple(int(x) for x in row) for row in self.add)
        object.__setattr__(self, "add", add)
        bad = self.violation()
        if bad is not None:
            raise ValueError(f"not a Boolean group: {bad[0]} fails at {bad[1]}")

    def violation(self) -> tuple[str, tuple[int, ...]] | None:
        """First failed axiom as (name, witnessing tuple), or None."""
        k = self.universe.size
        add = self.add
        if not 0 <= self.zero < k:
            return "zero in universe", (self.zero,)
        if len(add) != k or any(len(r) != k for r in add):
            return "square table", ()
        for a, b in product(range(k), repeat=2):
            if not 0 <= add[a][b] < k:
                return "total table", (a, b)
        for a in range(k):
            if add[a][self.zero] != a:
                return "neutral element", (a,)
            if add[a][a] != self.zero:
                return "a + a = 0", (a,)
        for a, b in product(range(k), repeat=2):
            if add[a][b] != add[b][a]:
                return "commutativity", (a, b)
        for a, b, c in product(range(k), repeat=3):
            if add[add[a][b]][c] != add[a][add[b][c]]:
                return "associativity", (a, b, c)
        return None

    @property
    def k(self) -> int:
        return self.universe.size

    def plus(self) -> MultiOp:
        return MultiOp.from_function(self.universe, 2, lambda a, b: self.add[a][b])

    def sum(self, values: Sequence[int], start: int | None = None) -> int:
        acc = self.zero if start is None else start
        for v in values:
            acc = self.add[acc][v]
        return acc

    def term(self, n: int, a: int, support: Sequence[int]) -> MultiOp:
        """The operation a + sum of x_i over i in ``support`` (1-based)."""
        k = self.k
        c = coordinates(k, n)
        add = np.array(self.add, dtype=np.int64)
        acc = np.full(k**n, a, dtype=np.int64)
        for i in sorted(support):
            acc = add[acc, c[i - 1]]
        return MultiOp(self.universe, n, np.left_shift(1, acc).astype(np.uint8))


def fg_generators(G: BooleanGroup) -> GeneratorSet:
    ops = [G.plus()] + [make_constant(G.universe, 1, a) for a in range(G.k)]
    names = ["plus"] + [f"c{a}" for a in range(G.k)]
    return GeneratorSet(G.universe, tuple(ops), tuple(names))


def fg_slice(G: BooleanGroup, n: int) -> list[MultiOp]:
    """All k * 2**n operations a + sum_{i in I} x_i of arity n."""
    out = []
    for a in range(G.k):
        for bits in product((0, 1), repeat=n):
            out.append(G.term(n, a, [i + 1 for i, b in enumerate(bits) if b]))
    return out


def fg_membership(G: BooleanGroup, f: MultiOp) -> tuple[int, frozenset[int]] | None:
    """Return (a, I) with f = a + sum_{i in I} x_i, or None if f is not in F_G."""
    if f.universe != G.universe:
        raise ValueError("universe mismatch")
    if not is_operation(f):
        raise ValueError("fg_membership needs an operation")
    k, n = f.k, f.arity
    z = G.zero
    zero_tuple = [z] * n
    a = _elem(f, zero_tuple)
    support = set()
    for i in range(n):
        for x in range(k):
            probe = list(zero_tuple)
            probe[i] = x
            if _elem(f, probe) != a:
                support.add(i + 1)
                break
    if G.term(n, a, support) != f:
        return None
    return a, frozenset(support)


def _elem(f: MultiOp, tup) -> int:
    idx = 0
    for x in tup:
        idx = idx * f.k + x
    return int(LOG2[f.table[idx]])
