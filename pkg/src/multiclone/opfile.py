"""Plain-text operation tables.

::

    universe 2
    op m arity 3
    0 0 0 : 0
    0 0 1 : 1
    ...
    1 1 1 : 0,1

Rows list every tuple in ascending index order (first coordinate most
significant). Values are ascending comma-separated elements, or ``-`` for
the empty set. Blank lines and lines starting with ``#`` are ignored.
"""

from __future__ import annotations

import re

from .closure import GeneratorSet
from .core import MAX_ARITY, MultiOp, Universe, coordinates, elements, mask

NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class OpFileError(ValueError):
    def __init__(self, line: int, reason: str):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


def format_value(m: int) -> str:
    return ",".join(map(str, elements(m))) if m else "-"


def emit_op(name: str, f: MultiOp) -> str:
    k, n = f.k, f.arity
    c = coordinates(k, n)
    lines = [f"op {name} arity {n}"]
    for i, v in enumerate(f.table):
        lines.append(" ".join(str(int(x)) for x in c[:, i]) + " : " + format_value(v))
    return "\n".join(lines) + "\n"


def emit_opfile(gens: GeneratorSet) -> str:
    parts = [f"universe {gens.universe.size}\n"]
    parts += [emit_op(name, f) for name, f in gens.items()]
    return "".join(parts)


def emit_single(name: str, f: MultiOp) -> str:
    """A complete file holding one operation."""
    return f"universe {f.k}\n" + emit_op(name, f)


def _int(tok: str, lineno: int, what: str) -> int:
    if not tok.isdigit():
        raise OpFileError(lineno, f"{what} {tok!r} is not a non-negative integer")
    return int(tok)


def parse_opfile(text: str) -> GeneratorSet:
    lines = [(i + 1, ln.strip()) for i, ln in enumerate(text.splitlines())]
    lines = [(i, ln) for i, ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise OpFileError(1, "missing 'universe <k>' header")
    lineno, head = lines[0]
    parts = head.split()
    if len(parts) != 2 or parts[0] != "universe":
        raise OpFileError(lineno, "expected 'universe <k>' header")
    k = _int(parts[1], lineno, "universe size")
    try:
        u = Universe(k)
    except ValueError as exc:
        raise OpFileError(lineno, str(exc)) from None

    names: list[str] = []
    ops: list[MultiOp] = []
    pos = 1
    while pos < len(lines):
        lineno, line = lines[pos]
        parts = line.split()
        if len(parts) != 4 or parts[0] != "op" or parts[2] != "arity":
            raise OpFileError(lineno, "expected 'op <name> arity <n>'")
        name = parts[1]
        if not NAME.match(name):
            raise OpFileError(lineno, f"bad operation name {name!r}")
        if name in names:
            raise OpFileError(lineno, f"duplicate operation name {name!r}")
        n = _int(parts[3], lineno, "arity")
        if not 1 <= n <= MAX_ARITY:
            raise OpFileError(lineno, f"arity must be in 1..{MAX_ARITY}")
        pos += 1
        expected = coordinates(k, n)
        table = bytearray(k**n)
        for i in range(k**n):
            if pos >= len(lines) or lines[pos][1].startswith("op "):
                at = lines[pos][0] if pos < len(lines) else lineno + i + 1
                raise OpFileError(at, f"operation {name!r} has {i} rows, expected {k**n}")
            rl, row = lines[pos]
            lhs, sep, rhs = row.partition(":")
            if not sep:
                raise OpFileError(rl, "row must have the form '<a_1> ... <a_n> : <values>'")
            tup = [_int(t, rl, "element") for t in lhs.split()]
            if len(tup) != n:
                raise OpFileError(rl, f"row has {len(tup)} coordinates, expected {n}")
            for a in tup:
                if a >= k:
                    raise OpFileError(rl, f"element {a} out of range for universe {k}")
            if tup != [int(x) for x in expected[:, i]]:
                raise OpFileError(rl, f"row {' '.join(map(str, tup))} out of order")
            table[i] = _parse_values(rhs.strip(), k, rl)
            pos += 1
        names.append(name)
        ops.append(MultiOp(u, n, bytes(table)))
    return GeneratorSet(u, tuple(ops), tuple(names))


def _parse_values(text: str, k: int, lineno: int) -> int:
    if text == "-":
        return 0
    if not text:
        raise OpFileError(lineno, "missing value (use '-' for the empty set)")
    vals = [_int(t.strip(), lineno, "element") for t in text.split(",")]
    for a in vals:
        if a >= k:
            raise OpFileError(lineno, f"element {a} out of range for universe {k}")
    if vals != sorted(set(vals)):
        raise OpFileError(lineno, "values must be strictly ascending")
    return mask(vals)
