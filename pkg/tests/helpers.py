"""Named operations used across the tests."""

from multiclone import BooleanGroup, MultiOp, Universe, make_constant
from multiclone.core import elements

U2 = Universe(2)
U3 = Universe(3)
U4 = Universe(4)


def xor3(u=U2):
    return MultiOp.from_function(u, 3, lambda x, y, z: x ^ y ^ z)


def median():
    return MultiOp.from_function(U2, 3, lambda x, y, z: (x & y) | (x & z) | (y & z))


def and2():
    return MultiOp.from_function(U2, 2, lambda x, y: x & y)


def xor2():
    return MultiOp.from_function(U2, 2, lambda x, y: x ^ y)


def neg():
    return MultiOp.from_function(U2, 1, lambda x: 1 - x)


def constants(u, n=1):
    return [make_constant(u, n, a) for a in range(u.size)]


def z2():
    return BooleanGroup(U2, 0, ((0, 1), (1, 0)))


def klein():
    return BooleanGroup(U4, 0, tuple(tuple(a ^ b for b in range(4)) for a in range(4)))


def as_sets(f):
    """Package table as the oracle's tuple of frozensets."""
    return tuple(frozenset(elements(v)) for v in f.table)


def from_sets(u, n, sets):
    from multiclone.core import mask

    return MultiOp(u, n, bytes(mask(s) for s in sets))


def ternary(code: int, u=U2):
    """The ternary operation on {0,1} whose value at index i is bit i of ``code``."""
    return MultiOp(u, 3, bytes(1 << ((code >> i) & 1) for i in range(8)))
