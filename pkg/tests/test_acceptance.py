"""Acceptance criteria, one test each. Every test records a PASS/FAIL line.

Run ``python tests/test_acceptance.py`` for the lines alone, or pytest for
the lines in the terminal summary.
"""

from __future__ import annotations

import itertools
import random
import time

import acceptance_log
import oracle
from helpers import U2, U3, U4, and2, as_sets, constants, klein, median, z2
from multiclone import (
    GeneratorSet,
    MultiOp,
    TypeTag,
    Verdict,
    pixley_isomer,
    majority_from_pixley,
    classify_five_type,
    close_fixed_arity,
    compose,
    enumerate_boolean_groups,
    extract_boolean_group,
    fg_generators,
    fg_membership,
    is_idempotent,
    is_majority,
    is_projection,
    is_semiprojection,
    kind,
    make_empty,
    make_projection,
    projections,
    projection_property_equivalence,
    verify_cancellation,
    verify_fixed_point_rule,
    verify_involutions,
)
from multiclone.opfile import format_value
from multiclone.projection import collapse_agreement


def _chi(sets):
    """Chi triple of a ternary table on {0,1} (as frozensets), or None."""
    def index(a, b, c):
        return a * 4 + b * 2 + c

    out = []
    for pattern in ((0, 0, 1), (0, 1, 0), (0, 1, 1)):
        got = None
        for which in (1, 2):
            if all(sets[index(*(v[p] for p in pattern))] == {v[which - 1]}
                   for v in itertools.product(range(2), repeat=2)):
                got = which
        if got is None:
            return None
        out.append(got)
    return tuple(out)


def _permuted(sets, perm):
    """h(x1, x2, x3) = f(x_perm1, x_perm2, x_perm3) on {0,1}."""
    out = []
    for x in itertools.product(range(2), repeat=3):
        y = [x[p - 1] for p in perm]
        out.append(sets[y[0] * 4 + y[1] * 2 + y[2]])
    return tuple(out)


def _all_ternary_multiops():
    for code in range(4**8):
        yield MultiOp(U2, 3, bytes((code >> (2 * i)) & 3 for i in range(8)))


# 1 ---------------------------------------------------------------------------

def test_criterion_01_five_type_totality():
    start = time.perf_counter()
    problems = []
    counts: dict[str, int] = {}
    for code in range(256):
        f = MultiOp(U2, 3, bytes(1 << ((code >> i) & 1) for i in range(8)))
        try:
            tw = classify_five_type(GeneratorSet(U2, (f,)), cap=4)
        except Exception as exc:  # a falsifier is a failure of this criterion
            problems.append((code, repr(exc)))
            continue
        tag, w = tw.type_tag, tw.witness
        counts[tag.value] = counts.get(tag.value, 0) + 1
        ok = {
            TypeTag.TRIVIAL: lambda: is_projection(f) is not None and w is None,
            TypeTag.T1_UNARY: lambda: w.arity == 1 and is_projection(w) is None,
            TypeTag.T2_BINARY_IDEMPOTENT: lambda: w.arity == 2 and is_idempotent(w) and is_projection(w) is None,
            TypeTag.T3_MAJORITY: lambda: w.arity == 3 and is_majority(w),
            TypeTag.T4_SEMIPROJECTION: lambda: is_projection(w) is None and is_semiprojection(w) is not None,
            TypeTag.T5_BOOLEAN_GROUP: lambda: tw.group is not None and all(
                w.table[(x * 2 + y) * 2 + z] == 1 << tw.group.add[tw.group.add[x][y]][z]
                for x, y, z in itertools.product(range(2), repeat=3)),
        }.get(tag, lambda: False)()
        if not ok or (w is not None and w not in tw.fragments[w.arity]):
            problems.append((code, tag.value))
    elapsed = time.perf_counter() - start
    passed = not problems and elapsed < 60
    acceptance_log.record(1, passed, f"256 generators, {counts}, problems={len(problems)}, {elapsed:.1f}s")
    assert not problems, problems[:5]
    assert elapsed < 60


# 2 ---------------------------------------------------------------------------

def test_criterion_02_pixley_to_majority():
    start = time.perf_counter()
    survivors = failures = 0
    for f in _all_ternary_multiops():
        if _chi(as_sets(f)) != (2, 1, 1):
            continue
        survivors += 1
        m = compose(f, [make_projection(U2, 3, 1), f, make_projection(U2, 3, 3)])
        s = as_sets(m)
        majority = all(
            s[a * 4 + b * 2 + c] == {x}
            for x, y in itertools.product(range(2), repeat=2)
            for a, b, c in ((x, x, y), (x, y, x), (y, x, x))
        )
        if not majority or majority_from_pixley(f) != m:
            failures += 1
    elapsed = time.perf_counter() - start
    passed = survivors > 0 and failures == 0 and elapsed < 60
    acceptance_log.record(2, passed, f"{survivors} chi=211 survivors of 65536, failures={failures}, {elapsed:.1f}s")
    assert survivors > 0 and failures == 0
    assert elapsed < 60


# 3 ---------------------------------------------------------------------------

def test_criterion_03_isomer_to_pixley():
    start = time.perf_counter()
    survivors = failures = 0
    perms = {(1, 2, 1): (1, 3, 2), (2, 2, 2): (2, 1, 3)}
    for f in _all_ternary_multiops():
        sets = as_sets(f)
        chi = _chi(sets)
        if chi not in perms:
            continue
        survivors += 1
        h = _permuted(sets, perms[chi])
        if _chi(h) != (2, 1, 1) or as_sets(pixley_isomer(f)) != h:
            failures += 1
    elapsed = time.perf_counter() - start
    passed = survivors > 0 and failures == 0 and elapsed < 60
    acceptance_log.record(3, passed, f"{survivors} chi in {{121,222}} survivors, failures={failures}, {elapsed:.1f}s")
    assert survivors > 0 and failures == 0
    assert elapsed < 60


# 4 ---------------------------------------------------------------------------

def test_criterion_04_klein_group_identities():
    start = time.perf_counter()
    k = 4
    g = MultiOp.from_function(U4, 3, lambda x, y, z: x ^ y ^ z)

    def t(x, y, z):
        (v,) = g(x, y, z)
        return v

    checks = {}
    triples = list(itertools.product(range(k), repeat=3))
    checks["cancellation identities, 64 triples"] = verify_cancellation(g, g) and all(
        t(t(*x), x[1], x[2]) == x[0] and t(x[0], t(*x), x[2]) == x[1] and t(x[0], x[1], t(*x)) == x[2]
        for x in triples
    )
    checks["biconditional, 64 triples"] = verify_fixed_point_rule(g) and all(
        (t(a, b, c) == a) == (b == c) for a, b, c in triples
    )
    checks["involutions, 16 pairs"] = verify_involutions(g) and all(
        t(t(x, a, b), a, b) == x for a, b in itertools.product(range(k), repeat=2) for x in range(k)
    )
    G = extract_boolean_group(g, 0)
    add = G.add
    checks["group axioms"] = all(
        add[a][0] == a and add[a][a] == 0 and add[a][b] == add[b][a] and add[add[a][b]][c] == add[a][add[b][c]]
        for a, b, c in triples
    )
    checks["g = x+y+z, 64 triples"] = all(t(x, y, z) == add[add[x][y]][z] for x, y, z in triples)
    quads = list(itertools.product(range(k), repeat=4))
    checks["((xyz)(x(yzt)t)t) = t, 256 quadruples"] = all(t(t(x, y, z), t(x, t(y, z, w), w), w) == w for x, y, z, w in quads)
    e = [make_projection(U4, 4, i) for i in (1, 2, 3, 4)]
    h = compose(g, [compose(g, e[:3]), compose(g, [e[0], compose(g, e[1:]), e[3]]), e[3]])
    checks["h = e^4_4, 256 quadruples"] = all(h(*q) == {q[3]} for q in quads)
    elapsed = time.perf_counter() - start
    failed = [name for name, ok in checks.items() if not ok]
    passed = not failed and elapsed < 10
    acceptance_log.record(4, passed, f"{len(checks) - len(failed)}/{len(checks)} checks, failed={failed}, {elapsed:.2f}s")
    assert not failed
    assert elapsed < 10


# 5 ---------------------------------------------------------------------------

def test_criterion_05_minimal_multiclone():
    gens = GeneratorSet(U2, (make_empty(U2, 1),))
    sizes, bad = [], []
    for n in range(1, 5):
        frag = close_fixed_arity(gens, n)
        want = {p.table for p in projections(U2, n)} | {make_empty(U2, n).table}
        sizes.append(len(frag))
        if not frag.saturated or frag.tables != want or len(frag) != n + 1:
            bad.append(n)
    acceptance_log.record(5, not bad, f"sizes {sizes} (expected [2, 3, 4, 5]), bad arities={bad}")
    assert not bad


# 6 ---------------------------------------------------------------------------

def test_criterion_06_fg_fragment_counts():
    start = time.perf_counter()
    report, bad = {}, []
    for label, G in (("Z/2", z2()), ("Klein", klein())):
        gens = fg_generators(G)
        sizes = []
        for n in range(1, 5):
            frag = close_fixed_arity(gens, n)
            sizes.append(len(frag))
            if not frag.saturated or len(frag) != G.k * 2**n:
                bad.append((label, n, "size"))
            if any(fg_membership(G, f) is None for f in frag):
                bad.append((label, n, "member rejected"))
            # every operation of the form a + sum x_i is in the fragment
            expected = oracle.boolean_group_slice(G.k, G.add, G.zero, n)
            if {as_sets(f) for f in frag} != expected:
                bad.append((label, n, "slice mismatch"))
            # exhaustive converse where the operation space is small
            if G.k ** (G.k**n) <= 1 << 16:
                for code in range(G.k ** (G.k**n)):
                    digits = [(code // G.k**i) % G.k for i in range(G.k**n)]
                    f = MultiOp(G.universe, n, bytes(1 << d for d in digits))
                    if (fg_membership(G, f) is not None) != (f in frag):
                        bad.append((label, n, "membership disagrees"))
                        break
        report[label] = sizes
    elapsed = time.perf_counter() - start
    passed = not bad and elapsed < 30
    acceptance_log.record(6, passed, f"sizes {report}, problems={bad}, {elapsed:.1f}s")
    assert not bad
    assert elapsed < 30


# 7 ---------------------------------------------------------------------------

def test_criterion_07_projection_property_equivalence():
    start = time.perf_counter()
    cases = []
    for G in enumerate_boolean_groups(U2) + enumerate_boolean_groups(U4):
        cases.append((f"F_G k={G.k} zero={G.zero}", fg_generators(G), Verdict.I_AND_II))
    cases.append(("projections", GeneratorSet(U2, tuple(projections(U2, 2))), Verdict.NEITHER))
    cases.append(("AND + constants", GeneratorSet(U2, (and2(), *constants(U2))), Verdict.NEITHER))
    cases.append(("median + constants", GeneratorSet(U2, (median(), *constants(U2))), Verdict.NEITHER))
    wrong, falsifiers = [], 0
    for label, gens, want in cases:
        rep = projection_property_equivalence(gens, cap=4)
        falsifiers += rep.verdict is Verdict.FALSIFIER
        if rep.verdict is not want:
            wrong.append((label, rep.verdict.value))
    elapsed = time.perf_counter() - start
    passed = not wrong and falsifiers == 0 and elapsed < 120
    acceptance_log.record(7, passed, f"{len(cases)} inputs, wrong={wrong}, falsifiers={falsifiers}, {elapsed:.1f}s")
    assert not wrong and falsifiers == 0
    assert elapsed < 120


# 8 ---------------------------------------------------------------------------

def test_criterion_08_collapse_agreement():
    rep = projection_property_equivalence(fg_generators(z2()), cap=4)
    rows = collapse_agreement(rep, [2, 3, 4])
    disagree = [g for g, c, proj in rows if c != proj]
    passed = len(rows) == 56 and not disagree
    acceptance_log.record(8, passed, f"{len(rows)} members checked (expected 56), disagreements={len(disagree)}")
    assert len(rows) == 56
    assert not disagree


# 9 ---------------------------------------------------------------------------

def _tiny_instances():
    """Named instances first, then seeded random generator sets."""
    named = [
        [make_empty(U2, 1)],
        [MultiOp.from_function(U2, 2, lambda x, y: x ^ y)],
        [and2()],
        [MultiOp(U2, 1, bytes([1, 0]))],                # partial: 0 -> {0}, 1 -> empty
        [MultiOp(U2, 1, bytes([3, 2]))],                # hyper: 0 -> {0,1}, 1 -> {1}
        [MultiOp(U2, 2, bytes([1, 3, 3, 0]))],          # multi-valued with an empty entry
    ]
    for gens in named:
        yield gens, 2
        yield gens, 3
    rng = random.Random(20261016)
    while True:
        gens = []
        for _ in range(rng.choice([1, 1, 2])):
            n = rng.choice([1, 2])
            gens.append(MultiOp(U2, n, bytes(rng.randrange(4) for _ in range(2**n))))
        yield gens, rng.choice([2, 3])


def test_criterion_09_closure_matches_oracle():
    compared = mismatches = 0
    kinds = set()
    for gens, cap in _tiny_instances():
        if compared >= 40:
            break
        try:
            expected = oracle.closure(2, [as_sets(g) for g in gens], cap, bound=40 if cap == 2 else 12)
        except oracle.TooLarge:
            continue
        gs = GeneratorSet(U2, tuple(gens))
        compared += 1
        kinds.update(kind(g).value for g in gens)
        for n in range(1, cap + 1):
            frag = close_fixed_arity(gs, n, span=cap)
            if not frag.saturated or {as_sets(f) for f in frag} != expected[n]:
                mismatches += 1
    passed = compared >= 20 and mismatches == 0
    acceptance_log.record(9, passed, f"{compared} instances, generator kinds {sorted(kinds)}, mismatched fragments={mismatches}")
    assert compared >= 20
    assert mismatches == 0


# 10 --------------------------------------------------------------------------

_COMPOSED: dict = {}


def _compose_cached(f, gs):
    key = (f.arity, f.table, tuple(g.table for g in gs))
    if key not in _COMPOSED:
        _COMPOSED[key] = compose(f, gs)
    return _COMPOSED[key]


def _show(f):
    return "[" + " ".join(format_value(v) for v in f.table) + "]"


def _assoc_counterexample(f, hs, gs, composer=compose):
    lhs = composer(composer(f, hs), gs)
    rhs = composer(f, [composer(h, gs) for h in hs])
    return None if lhs == rhs else (f, hs, gs, lhs, rhs)


def _exhaustive_k2():
    """All (f, hs, gs) at k=2 with outer/middle/inner arities in {1, 2}, one binary level at most."""
    ops = {n: [MultiOp(U2, n, bytes((c >> (2 * i)) & 3 for i in range(2**n))) for c in range(4 ** (2**n))]
           for n in (1, 2)}
    checked, found = 0, []
    for m, p, q in ((1, 1, 1), (2, 1, 1), (1, 2, 1), (1, 1, 2)):
        for f in ops[m]:
            for hs in itertools.product(ops[p], repeat=m):
                for gs in itertools.product(ops[q], repeat=p):
                    checked += 1
                    bad = _assoc_counterexample(f, list(hs), list(gs), _compose_cached)
                    if bad is not None:
                        found.append(((m, p, q), bad))
                        break
                if found and found[-1][0] == (m, p, q):
                    break
            if found and found[-1][0] == (m, p, q):
                break
    return checked, found


def test_criterion_10_associativity():
    start = time.perf_counter()
    checked, found = _exhaustive_k2()
    rng = random.Random(10_000)
    random_failures = 0
    first_random = None
    for _ in range(10_000):
        m, p, q = (rng.randint(1, 3) for _ in range(3))

        def rand(n):
            return MultiOp(U3, n, bytes(rng.randrange(8) for _ in range(3**n)))

        bad = _assoc_counterexample(rand(m), [rand(p) for _ in range(m)], [rand(q) for _ in range(p)])
        if bad is not None:
            random_failures += 1
            first_random = first_random or bad
    elapsed = time.perf_counter() - start
    families = sorted({fam for fam, _ in found})
    detail = (f"k=2: {checked} cases scanned, counterexample families {families}; "
              f"k=3: {random_failures}/10000 random cases fail; {elapsed:.1f}s")
    if found:
        _, (f, hs, gs, lhs, rhs) = found[0]
        detail += (f"; first: f={_show(f)}, hs={[_show(h) for h in hs]}, gs={[_show(g) for g in gs]}, "
                   f"f(h(g))={_show(lhs)} vs f(h1(g), h2(g))={_show(rhs)}")
    acceptance_log.record(10, not found and random_failures == 0, detail)
    assert not found, detail
    assert random_failures == 0, detail


if __name__ == "__main__":
    import sys

    tests = [v for k_, v in sorted(globals().items()) if k_.startswith("test_criterion_")]
    failed = 0
    for test in tests:
        try:
            test()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
