"""Checking the projection-property characterization of Boolean-group clones."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import permutations

from .classifiers import is_idempotent, is_projection
from .closure import (
    DEFAULT_LIMIT,
    BooleanGroup,
    ClosureLimitExceeded,
    CloneFragment,
    GeneratorSet,
    LazyClone,
    fg_slice,
)
from .core import DEFAULT_CAP, MultiOp, Universe, as_universe, identify, is_operation, isomer, make_constant


class ConditionI(str, enum.Enum):
    HOLDS = "holds"
    FALSE = "false"
    NOT_WITNESSED = "not_witnessed"  # no idempotent non-projection up to the cap
    INCONCLUSIVE = "inconclusive"


class Verdict(str, enum.Enum):
    I_AND_II = "i_and_ii"
    NEITHER = "neither"
    FALSIFIER = "falsifier"
    INCONCLUSIVE = "inconclusive"


@dataclass
class ProjectionPropertyReport:
    has_all_constants: bool | None = None
    binary_idempotents_are_projections: bool | None = None
    idempotent_nonprojection: tuple[int, MultiOp] | None = None
    matched_group: BooleanGroup | None = None
    verdict: Verdict | None = None
    condition_i: ConditionI | None = None
    cap: int = DEFAULT_CAP
    notes: list[str] = field(default_factory=list)
    fragments: dict[int, CloneFragment] = field(default_factory=dict, repr=False)


def collapses_to_first(f: MultiOp) -> bool:
    """f(y, y, x3, ..., xn) = {y} on all tuples."""
    g = identify(f, 1, 2)
    return is_projection(g) == 1


def collapse_projection_test(ctx: ProjectionPropertyReport, g: MultiOp) -> bool:
    """True iff some isomer of g satisfies f(y, y, x3, ..., xn) = y.

    ``ctx`` must certify that the clone holds all constants and that its
    binary idempotent members are exactly the two projections; ``g`` must be
    a member of the clone.
    """
    if not (ctx.has_all_constants and ctx.binary_idempotents_are_projections):
        raise ValueError("clone hypotheses (constants, binary idempotents) are not certified")
    if g.arity < 2 or not is_operation(g):
        raise ValueError("g must be an operation of arity >= 2")
    frag = ctx.fragments.get(g.arity)
    if frag is None or g not in frag:
        raise ValueError(f"g is not a member of a computed fragment of arity {g.arity}")
    return any(collapses_to_first(isomer(g, p)) for p in permutations(range(1, g.arity + 1)))


def _require_operations(gens: GeneratorSet) -> None:
    for name, g in gens.items():
        if not is_operation(g):
            raise ValueError(f"generator {name!r} is not an operation; the characterization concerns clones of operations")


def check_condition_i(gens: GeneratorSet, cap: int = DEFAULT_CAP, limit: int = DEFAULT_LIMIT,
                      clone: LazyClone | None = None) -> ProjectionPropertyReport:
    if cap < 3:
        raise ValueError("cap must be at least 3")
    clone = clone or LazyClone(gens, limit)
    rep = ProjectionPropertyReport(cap=cap)
    u = gens.universe
    inconclusive = False

    frag1 = clone.fragment(1)
    rep.has_all_constants = all(make_constant(u, 1, a) in frag1 for a in range(u.size))
    if not rep.has_all_constants and not frag1.saturated:
        rep.has_all_constants = None
        inconclusive = True

    frag2 = clone.fragment(2)
    bad = next((f for f in frag2 if is_idempotent(f) and is_projection(f) is None), None)
    if bad is not None:
        rep.binary_idempotents_are_projections = False
        rep.notes.append("binary idempotent non-projection present")
    elif frag2.saturated:
        rep.binary_idempotents_are_projections = True
    else:
        inconclusive = True

    for n in range(3, cap + 1):
        frag = clone.fragment(n)
        w = next((f for f in frag if is_idempotent(f) and is_projection(f) is None), None)
        if w is not None:
            rep.idempotent_nonprojection = (n, w)
            break
        if not frag.saturated:
            inconclusive = True
            break

    if rep.has_all_constants is False or rep.binary_idempotents_are_projections is False:
        rep.condition_i = ConditionI.FALSE
    elif inconclusive:
        rep.condition_i = ConditionI.INCONCLUSIVE
    elif rep.idempotent_nonprojection is None:
        rep.condition_i = ConditionI.NOT_WITNESSED
    else:
        rep.condition_i = ConditionI.HOLDS
    rep.fragments = dict(clone.fragments)
    return rep


def enumerate_boolean_groups(u: Universe | int) -> list[BooleanGroup]:
    """Every Boolean group table on {0..k-1}; empty unless k is a power of two."""
    u = as_universe(u)
    k = u.size
    if k & (k - 1):
        return []
    seen = set()
    out = []
    # element labels[v] carries the bit vector v; + is xor of vectors
    for labels in permutations(range(k)):
        inv = [0] * k
        for v, a in enumerate(labels):
            inv[a] = v
        add = tuple(tuple(labels[inv[a] ^ inv[b]] for b in range(k)) for a in range(k))
        if add in seen:
            continue
        seen.add(add)
        out.append(BooleanGroup(u, labels[0], add))
    return out


def check_condition_ii(gens: GeneratorSet, cap: int = DEFAULT_CAP, limit: int = DEFAULT_LIMIT,
                       clone: LazyClone | None = None) -> BooleanGroup | None:
    """First Boolean group G with [gens] agreeing with F_G at every arity <= cap.

    Raises ClosureLimitExceeded if a fragment needed for the comparison is unsaturated.
    """
    if cap < 2:
        raise ValueError("cap must be at least 2")
    clone = clone or LazyClone(gens, limit)
    candidates = enumerate_boolean_groups(gens.universe)
    for n in range(1, cap + 1):
        if not candidates:
            return None
        frag = clone.saturated(n)
        candidates = [G for G in candidates
                      if len(frag) == G.k * 2**n and frag.tables == {f.table for f in fg_slice(G, n)}]
    return candidates[0] if candidates else None


def projection_property_equivalence(gens: GeneratorSet, cap: int = DEFAULT_CAP,
                         limit: int = DEFAULT_LIMIT) -> ProjectionPropertyReport:
    _require_operations(gens)
    clone = LazyClone(gens, limit)
    rep = check_condition_i(gens, cap, limit, clone)
    try:
        rep.matched_group = check_condition_ii(gens, cap, limit, clone)
        ii_known = True
    except ClosureLimitExceeded as exc:
        rep.notes.append(str(exc))
        ii_known = False
    rep.fragments = dict(clone.fragments)

    i_holds = rep.condition_i is ConditionI.HOLDS
    if rep.condition_i is ConditionI.INCONCLUSIVE or not ii_known:
        rep.verdict = Verdict.INCONCLUSIVE
    elif i_holds and rep.matched_group is not None:
        rep.verdict = Verdict.I_AND_II
    elif not i_holds and rep.matched_group is None:
        rep.verdict = Verdict.NEITHER
    else:
        rep.verdict = Verdict.FALSIFIER
        rep.notes.append("conditions (i) and (ii) disagree at saturated fragments")
    return rep


def collapse_agreement(rep: ProjectionPropertyReport, arities=None) -> list[tuple[MultiOp, bool, bool]]:
    """(member, collapse-test result, is-projection) for every member of the given fragments."""
    out = []
    for n in sorted(arities or rep.fragments):
        if n < 2:
            continue
        for g in rep.fragments[n]:
            out.append((g, collapse_projection_test(rep, g), is_projection(g) is not None))
    return out


__all__ = [
    "ConditionI",
    "ProjectionPropertyReport",
    "Verdict",
    "check_condition_i",
    "check_condition_ii",
    "enumerate_boolean_groups",
    "collapse_agreement",
    "collapse_projection_test",
    "collapses_to_first",
    "projection_property_equivalence",
]
