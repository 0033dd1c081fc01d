"""Multioperations on a finite universe {0, ..., k-1}.

A multioperation of arity n is stored as a dense table of k**n subset masks,
one byte each, indexed row-major with the first coordinate most significant.
Bit ``a`` of a mask is set iff element ``a`` belongs to the value.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations
from typing import Iterable, Sequence

import numpy as np

MAX_UNIVERSE = 8
MAX_ARITY = 6
DEFAULT_CAP = 4

POPCOUNT = np.array([bin(i).count("1") for i in range(256)], dtype=np.uint8)
# element index of a singleton mask; 0 for anything else
LOG2 = np.zeros(256, dtype=np.uint8)
for _a in range(8):
    LOG2[1 << _a] = _a


@dataclass(frozen=True, order=True)
class Universe:
    size: int

    def __post_init__(self):
        if not isinstance(self.size, (int, np.integer)) or not 2 <= self.size <= MAX_UNIVERSE:
            raise ValueError(f"universe size must be in 2..{MAX_UNIVERSE}, got {self.size!r}")

    @property
    def full_mask(self) -> int:
        return (1 << self.size) - 1

    def __iter__(self):
        return iter(range(self.size))

    def __len__(self):
        return self.size


def as_universe(u: Universe | int) -> Universe:
    return u if isinstance(u, Universe) else Universe(int(u))


# --- subset masks -----------------------------------------------------------

def mask(elements: Iterable[int]) -> int:
    m = 0
    for a in elements:
        m |= 1 << a
    return m


def elements(m: int) -> tuple[int, ...]:
    return tuple(a for a in range(MAX_UNIVERSE) if m >> a & 1)


# --- tuple indexing ---------------------------------------------------------

def _check_arity(n: int) -> None:
    if not isinstance(n, (int, np.integer)) or not 1 <= n <= MAX_ARITY:
        raise ValueError(f"arity must be in 1..{MAX_ARITY}, got {n!r}")


@lru_cache(maxsize=None)
def coordinates(k: int, n: int) -> np.ndarray:
    """Array of shape (n, k**n): row t holds coordinate t+1 of every tuple."""
    idx = np.arange(k**n)
    rows = [(idx // k ** (n - 1 - t)) % k for t in range(n)]
    out = np.array(rows, dtype=np.int64)
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def repeated_tuples(k: int, n: int) -> np.ndarray:
    """Boolean mask over tuple indices: True where some element repeats."""
    c = coordinates(k, n)
    rep = np.zeros(k**n, dtype=bool)
    for s in range(n):
        for t in range(s + 1, n):
            rep |= c[s] == c[t]
    rep.setflags(write=False)
    return rep


def tuple_index(k: int, tup: Sequence[int]) -> int:
    i = 0
    for a in tup:
        i = i * k + a
    return i


def index_tuple(k: int, n: int, index: int) -> tuple[int, ...]:
    out = []
    for _ in range(n):
        index, a = divmod(index, k)
        out.append(a)
    return tuple(reversed(out))


# --- the value type ---------------------------------------------------------

class OpKind(str, enum.Enum):
    OPERATION = "operation"
    PARTIAL = "partial"
    HYPER = "hyper"
    MULTI = "multi"


@dataclass(frozen=True)
class MultiOp:
    """An n-ary multioperation A^n -> P(A), immutable and hashable by table bytes."""

    universe: Universe
    arity: int
    table: bytes = field(repr=False)

    def __post_init__(self):
        u = as_universe(self.universe)
        object.__setattr__(self, "universe", u)
        _check_arity(self.arity)
        table = self.table
        if isinstance(table, np.ndarray):
            table = np.asarray(table, dtype=np.uint8).tobytes()
        elif not isinstance(table, bytes):
            table = bytes(table)
        object.__setattr__(self, "table", table)
        if len(table) != u.size**self.arity:
            raise ValueError(f"table length {len(table)} != {u.size}**{self.arity}")
        if table and max(table) > u.full_mask:
            raise ValueError("table entry has bits outside the universe")

    @classmethod
    def from_function(cls, u: Universe | int, arity: int, fn) -> MultiOp:
        """Build a table from ``fn(*tuple)`` returning an element or an iterable of elements."""
        u = as_universe(u)
        c = coordinates(u.size, arity)
        out = bytearray(u.size**arity)
        for i in range(len(out)):
            v = fn(*(int(x) for x in c[:, i]))
            out[i] = 1 << v if isinstance(v, (int, np.integer)) else mask(v)
        return cls(u, arity, bytes(out))

    @property
    def k(self) -> int:
        return self.universe.size

    @property
    def array(self) -> np.ndarray:
        return np.frombuffer(self.table, dtype=np.uint8)

    def __call__(self, *tup: int) -> frozenset[int]:
        return frozenset(elements(evaluate(self, tup)))

    def __repr__(self):
        return f"MultiOp(k={self.k}, arity={self.arity}, kind={kind(self).value})"


# --- constructions ----------------------------------------------------------

def make_projection(u: Universe | int, n: int, i: int) -> MultiOp:
    u = as_universe(u)
    _check_arity(n)
    if not 1 <= i <= n:
        raise ValueError(f"projection coordinate {i} out of range 1..{n}")
    return _projection(u.size, n, i)


@lru_cache(maxsize=None)
def _projection(k: int, n: int, i: int) -> MultiOp:
    return MultiOp(Universe(k), n, (np.left_shift(1, coordinates(k, n)[i - 1])).astype(np.uint8))


def projections(u: Universe | int, n: int) -> list[MultiOp]:
    return [make_projection(u, n, i) for i in range(1, n + 1)]


def make_constant(u: Universe | int, n: int, a: int) -> MultiOp:
    u = as_universe(u)
    _check_arity(n)
    if not 0 <= a < u.size:
        raise ValueError(f"element {a} not in universe of size {u.size}")
    return MultiOp(u, n, bytes([1 << a]) * u.size**n)


def make_empty(u: Universe | int, n: int) -> MultiOp:
    u = as_universe(u)
    _check_arity(n)
    return MultiOp(u, n, bytes(u.size**n))


def _check_permutation(perm: Sequence[int], n: int) -> tuple[int, ...]:
    perm = tuple(int(p) for p in perm)
    if sorted(perm) != list(range(1, n + 1)):
        raise ValueError(f"{perm} is not a permutation of 1..{n}")
    return perm


def isomer(f: MultiOp, perm: Sequence[int]) -> MultiOp:
    """g(x_1, ..., x_n) = f(x_perm(1), ..., x_perm(n)); ``perm`` is 1-based.

    Applying ``q`` to ``isomer(f, p)`` gives ``isomer(f, r)`` with r(t) = q(p(t)).
    """
    perm = _check_permutation(perm, f.arity)
    if perm == tuple(range(1, f.arity + 1)):
        return f
    k, n = f.k, f.arity
    c = coordinates(k, n)
    idx = np.zeros(k**n, dtype=np.int64)
    for t in range(n):
        idx = idx * k + c[perm[t] - 1]
    return MultiOp(f.universe, n, f.array[idx])


def identify(f: MultiOp, i: int, j: int) -> MultiOp:
    """Minor g(x_1..x_{n-1}) = f(x_1, .., x_{j-1}, x_i, x_j, .., x_{n-1}) for i < j."""
    n = f.arity
    if n < 2:
        raise ValueError("identify needs arity >= 2")
    if not 1 <= i < j <= n:
        raise ValueError(f"need 1 <= i < j <= {n}, got i={i}, j={j}")
    k = f.k
    c = coordinates(k, n - 1)
    src = [c[t] for t in range(j - 1)] + [c[i - 1]] + [c[t] for t in range(j - 1, n - 1)]
    idx = np.zeros(k ** (n - 1), dtype=np.int64)
    for col in src:
        idx = idx * k + col
    return MultiOp(f.universe, n - 1, f.array[idx])


def minors(f: MultiOp):
    """Yield ((i, j), identify(f, i, j)) for every pair of coordinates."""
    for i in range(1, f.arity):
        for j in range(i + 1, f.arity + 1):
            yield (i, j), identify(f, i, j)


def evaluate(f: MultiOp, tup: Sequence[int]) -> int:
    """Return the subset mask f(tup)."""
    if len(tup) != f.arity:
        raise ValueError(f"expected {f.arity} arguments, got {len(tup)}")
    for a in tup:
        if not 0 <= a < f.k:
            raise ValueError(f"element {a} not in universe of size {f.k}")
    return f.table[tuple_index(f.k, tup)]


def kind(f: MultiOp) -> OpKind:
    sizes = POPCOUNT[f.array]
    has_empty = bool((sizes == 0).any())
    has_multi = bool((sizes >= 2).any())
    if has_empty and has_multi:
        return OpKind.MULTI
    if has_multi:
        return OpKind.HYPER
    if has_empty:
        return OpKind.PARTIAL
    return OpKind.OPERATION


def is_operation(f: MultiOp) -> bool:
    return bool((POPCOUNT[f.array] == 1).all())


def all_permutations(n: int):
    return permutations(range(1, n + 1))
