"""Five-type classification of non-trivial multiclones with explicit witnesses."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import product

from .classifiers import (
    ChiTriple,
    SemiprojectionCounterexample,
    chi_triple,
    is_majority,
    is_minority,
    is_projection,
    is_semiprojection,
    is_totally_symmetric,
    semiprojection_check,
)
from .closure import (
    DEFAULT_LIMIT,
    BooleanGroup,
    ClosureLimitExceeded,
    CloneFragment,
    GeneratorSet,
    LazyClone,
    compose,
)
from .core import (
    DEFAULT_CAP,
    LOG2,
    MultiOp,
    elements,
    is_operation,
    isomer,
    make_projection,
    minors,
)


class GuaranteeFailed(Exception):
    """A step the theory guarantees did not hold; carries the offending data."""

    def __init__(self, message: str, tuple=None, provenance=None, operation: MultiOp | None = None):
        self.tuple = tuple
        self.provenance = list(provenance or [])
        self.operation = operation
        if tuple is not None:
            message = f"{message} at {tuple}"
        super().__init__(message)


class TypeTag(str, enum.Enum):
    T1_UNARY = "T1_unary"
    T2_BINARY_IDEMPOTENT = "T2_binary_idempotent"
    T3_MAJORITY = "T3_majority"
    T4_SEMIPROJECTION = "T4_semiprojection"
    T5_BOOLEAN_GROUP = "T5_boolean_group"
    TRIVIAL = "trivial"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Step:
    name: str
    detail: str = ""
    op: MultiOp | None = None


@dataclass
class TypeWitness:
    type_tag: TypeTag
    witness: MultiOp | None = None
    group: BooleanGroup | None = None
    provenance: list[Step] = field(default_factory=list)
    fragments: dict[int, CloneFragment] = field(default_factory=dict, repr=False)

    @property
    def decided(self) -> bool:
        return self.type_tag is not TypeTag.INCONCLUSIVE


@dataclass
class Violation:
    arity: int
    witness: MultiOp
    fragments: dict[int, CloneFragment]


def _first_nonprojection(frag: CloneFragment) -> MultiOp | None:
    for f in frag.members:
        if is_projection(f) is None:
            return f
    return None


def minimal_violation(gens: GeneratorSet, cap: int = DEFAULT_CAP, limit: int = DEFAULT_LIMIT,
                      clone: LazyClone | None = None) -> Violation | None:
    """Least arity n <= cap whose fragment holds a non-projection.

    Returns None when every fragment up to ``cap`` is saturated and trivial.
    Raises ClosureLimitExceeded when an unsaturated fragment shows only
    projections, since absence cannot then be certified.
    """
    clone = clone or LazyClone(gens, limit)
    for n in range(1, cap + 1):
        frag = clone.fragment(n)
        w = _first_nonprojection(frag)
        if w is not None:
            return Violation(n, w, dict(clone.fragments))
        if not frag.saturated:
            raise ClosureLimitExceeded(frag, "no non-projection found before the limit")
    return None


# --- constructions from the proof ------------------------------------------

def pixley_isomer(f: MultiOp) -> MultiOp:
    """Isomer of f with chi = 211, for f with chi in {121, 222}."""
    chi = chi_triple(f)
    if chi == ChiTriple(1, 2, 1):
        h = isomer(f, (1, 3, 2))
    elif chi == ChiTriple(2, 2, 2):
        h = isomer(f, (2, 1, 3))
    else:
        raise ValueError(f"needs chi in {{121, 222}}, got {chi}")
    if chi_triple(h) != ChiTriple(2, 1, 1):
        raise GuaranteeFailed(f"isomer of chi={chi} operation has chi={chi_triple(h)}, expected 211", operation=f)
    return h


def majority_from_pixley(h: MultiOp) -> MultiOp:
    """m(x1, x2, x3) = h(x1, h(x1, x2, x3), x3), a majority when chi(h) = 211."""
    if chi_triple(h) != ChiTriple(2, 1, 1):
        raise ValueError("needs chi = 211")
    e1, _, e3 = (make_projection(h.universe, 3, i) for i in (1, 2, 3))
    m = compose(h, [e1, h, e3])
    if not is_majority(m):
        raise GuaranteeFailed("h(x1, h(x1,x2,x3), x3) is not a majority", operation=h)
    return m


def _require_minority(*fs: MultiOp) -> None:
    for f in fs:
        if f.arity != 3 or not is_minority(f):
            raise ValueError("ternary minority multioperations required")
    if len({f.universe for f in fs}) > 1:
        raise ValueError("universe mismatch")


def cancellation_violation(f1: MultiOp, f2: MultiOp) -> tuple[int, tuple[int, int, int]] | None:
    """First failure of f1(f2(x),x2,x3) = x1, f1(x1,f2(x),x3) = x2, f1(x1,x2,f2(x)) = x3."""
    _require_minority(f1, f2)
    k = f1.k
    for x in product(range(k), repeat=3):
        inner = elements(f2.table[(x[0] * k + x[1]) * k + x[2]])
        for pos in range(3):
            got = 0
            for v in inner:
                args = list(x)
                args[pos] = v
                got |= f1.table[(args[0] * k + args[1]) * k + args[2]]
            if got != 1 << x[pos]:
                return pos + 1, x
    return None


def verify_cancellation(f1: MultiOp, f2: MultiOp) -> bool:
    return cancellation_violation(f1, f2) is None


def fixed_point_violation(f: MultiOp) -> tuple[int, int, int] | None:
    _require_minority(f)
    k = f.k
    for a, b, c in product(range(k), repeat=3):
        if (f.table[(a * k + b) * k + c] == 1 << a) != (b == c):
            return a, b, c
    return None


def verify_fixed_point_rule(f: MultiOp) -> bool:
    """f(a, b, c) = {a} iff b = c, for all a, b, c."""
    return fixed_point_violation(f) is None


def involution_violation(g: MultiOp) -> tuple[int, int, int] | None:
    """First (x, a, b) where x -> g(x, a, b) fails to be a singleton-valued involution."""
    _require_minority(g)
    k = g.k
    for a, b in product(range(k), repeat=2):
        for x in range(k):
            v = g.table[(x * k + a) * k + b]
            if bin(v).count("1") != 1:
                return x, a, b
            y = int(LOG2[v])
            if g.table[(y * k + a) * k + b] != 1 << x:
                return x, a, b
    return None


def verify_involutions(g: MultiOp) -> bool:
    return involution_violation(g) is None


@dataclass
class MinorityAnalysis:
    minority: MultiOp
    semiprojection4: MultiOp | None
    steps: list[Step] = field(default_factory=list)


def analyze_minority_clone(frag3: CloneFragment, frag4: CloneFragment) -> MinorityAnalysis:
    for frag in (frag3, frag4):
        if not frag.saturated:
            raise ClosureLimitExceeded(frag, "minority analysis needs a saturated fragment")
    rest = [f for f in frag3.members if is_projection(f) is None]
    if not rest:
        raise ValueError("arity-3 fragment has no non-projection")
    if not all(is_minority(f) for f in rest):
        raise ValueError("arity-3 non-projections must all be minorities")
    if len(rest) != 1:
        raise GuaranteeFailed(f"{len(rest)} distinct minorities in the clone, expected exactly one",
                               operation=rest[1])
    m = rest[0]
    steps = [Step("unique-minority", "unique ternary non-projection is a minority", m)]
    bad = cancellation_violation(m, m)
    if bad is not None:
        raise GuaranteeFailed(f"cancellation identity at position {bad[0]} fails", bad[1], operation=m)
    bad4 = fixed_point_violation(m)
    if bad4 is not None:
        raise GuaranteeFailed("f(a, b, c) = {a} iff b = c fails", bad4, operation=m)
    steps.append(Step("cancellation", "cancellation identities hold"))
    if not is_totally_symmetric(m):
        raise GuaranteeFailed("unique minority is not totally symmetric", operation=m)
    bad5 = involution_violation(m)
    if bad5 is not None or not is_operation(m):
        raise GuaranteeFailed("x -> m(x, a, b) is not an involutive permutation", bad5, operation=m)
    steps.append(Step("involutions", "minority is a totally symmetric operation"))
    semi = None
    for f in frag4.members:
        if is_projection(f) is None and is_semiprojection(f) is not None:
            semi = f
            break
    return MinorityAnalysis(m, semi, steps)


def extract_boolean_group(g: MultiOp, zero: int = 0) -> BooleanGroup:
    """Read x + y = g(x, y, zero) off a totally symmetric minority operation and check it."""
    if g.arity != 3 or not is_operation(g):
        raise ValueError("extract_boolean_group needs a ternary operation")
    k = g.k
    if not 0 <= zero < k:
        raise ValueError(f"zero {zero} not in universe")
    add = tuple(tuple(int(LOG2[g.table[(a * k + b) * k + zero]]) for b in range(k)) for a in range(k))
    try:
        G = BooleanGroup(g.universe, zero, add)
    except ValueError:
        bad = BooleanGroup.violation(_Unchecked(g.universe, zero, add))
        raise GuaranteeFailed(f"x + y = g(x, y, {zero}) violates {bad[0]}", bad[1], operation=g) from None
    for x, y, z in product(range(k), repeat=3):
        if g.table[(x * k + y) * k + z] != 1 << add[add[x][y]][z]:
            raise GuaranteeFailed("g(x,y,z) != x + y + z", (x, y, z), operation=g)

    def t(x, y, z):
        return add[add[x][y]][z]

    # ((xyz)(x(yzt)t)t) = t
    for x, y, z, w in product(range(k), repeat=4):
        if t(t(x, y, z), t(x, t(y, z, w), w), w) != w:
            raise GuaranteeFailed("identity ((xyz)(x(yzt)t)t) = t fails", (x, y, z, w), operation=g)
    e = [make_projection(g.universe, 4, i) for i in (1, 2, 3, 4)]
    h = compose(g, [
        compose(g, e[:3]),
        compose(g, [e[0], compose(g, e[1:]), e[3]]),
        e[3],
    ])
    if h != e[3]:
        raise GuaranteeFailed("quaternary h((123)(1(234)4)4) is not the fourth projection", operation=g)
    return G


@dataclass(frozen=True)
class _Unchecked:
    universe: object
    zero: int
    add: tuple


# --- the engine -------------------------------------------------------------

def _lower_nonprojection(f: MultiOp) -> tuple[str, MultiOp] | None:
    """An identification minor (or, for binary f, the diagonal) that is not a projection."""
    if f.arity == 2:
        diag = compose(f, [make_projection(f.universe, 1, 1)] * 2)
        return ("diagonal", diag) if is_projection(diag) is None else None
    for (i, j), g in minors(f):
        if is_projection(g) is None:
            return f"identify x{i}, x{j}", g
    return None


def classify_five_type(gens: GeneratorSet, cap: int = DEFAULT_CAP, limit: int = DEFAULT_LIMIT,
                       zero: int = 0) -> TypeWitness:
    """Witness one of the five types in [gens] minus the projections.

    Every witness is checked directly against its defining identities, so a
    found witness is valid even when the closure is only a lower bound
    (multi-valued generators). Conclusions that rest on absence need exact,
    saturated fragments and come back inconclusive otherwise.

    Raises GuaranteeFailed when a guaranteed step fails.
    """
    if cap < 1:
        raise ValueError("cap must be positive")
    if not 0 <= zero < gens.universe.size:
        raise ValueError(f"zero {zero} not in universe")
    clone = LazyClone(gens, limit)
    exact = clone.exact
    prov: list[Step] = []

    def inconclusive(exc: ClosureLimitExceeded | str) -> TypeWitness:
        prov.append(Step("inconclusive", str(exc)))
        return TypeWitness(TypeTag.INCONCLUSIVE, provenance=prov, fragments=dict(clone.fragments))

    def done(tag, witness=None, group=None) -> TypeWitness:
        if witness is not None and witness not in clone.fragment(witness.arity):
            raise GuaranteeFailed("witness is not a member of the generated fragment",
                                   provenance=prov, operation=witness)
        return TypeWitness(tag, witness, group, prov, dict(clone.fragments))

    def descend(w: MultiOp) -> MultiOp:
        # with an exact closure the minimal arity guarantees projection minors
        while (low := _lower_nonprojection(w)) is not None:
            if exact:
                raise GuaranteeFailed(f"{low[0]} of a minimal-arity member is not a projection",
                                       provenance=prov, operation=w)
            prov.append(Step("minor", f"{low[0]} is a non-projection member", low[1]))
            w = low[1]
        return w

    def small(w: MultiOp) -> TypeWitness:
        if w.arity == 1:
            return done(TypeTag.T1_UNARY, w)
        if w.arity == 2:
            prov.append(Step("idempotent", "diagonal minor is the identity"))
            return done(TypeTag.T2_BINARY_IDEMPOTENT, w)
        res = semiprojection_check(w)
        if isinstance(res, SemiprojectionCounterexample):
            raise GuaranteeFailed(
                f"arity-{w.arity} operation with projection minors is not a semiprojection on x{res.coordinate}",
                res.tuple, prov, w)
        prov.append(Step("semiprojection-arity", f"semiprojection on coordinate {res}"))
        return done(TypeTag.T4_SEMIPROJECTION, w)

    try:
        v = minimal_violation(gens, cap, limit, clone)
    except ClosureLimitExceeded as exc:
        return inconclusive(exc)
    if v is None:
        # projections are closed under composition, so [gens] is trivial iff every generator is one
        if all(is_projection(g) is not None for g in gens):
            prov.append(Step("trivial", "every generator is a projection"))
            return done(TypeTag.TRIVIAL)
        return inconclusive(f"fragments 1..{cap} hold only projections but some generator is not one; "
                            "raise the cap")
    prov.append(Step("minimal-arity", f"least arity with a non-projection is {v.arity}", v.witness))
    w = descend(v.witness)
    if w.arity != 3:
        return small(w)

    frag3 = clone.fragment(3)
    rest = [f for f in frag3.members if is_projection(f) is None]
    for f in rest:
        i = is_semiprojection(f)
        if i is not None:
            prov.append(Step("semiprojection", f"ternary semiprojection on coordinate {i}"))
            return done(TypeTag.T4_SEMIPROJECTION, f)
    for f in rest:
        if is_majority(f):
            prov.append(Step("majority", "ternary majority in the fragment"))
            return done(TypeTag.T3_MAJORITY, f)
    if not frag3.saturated:
        return inconclusive(ClosureLimitExceeded(frag3, "absence of majorities needs saturation"))

    for f in rest:
        chi = chi_triple(f)
        if chi is None:
            prov.append(Step("ternary", "member with a non-projection minor", f))
            return small(descend(f))
        s = str(chi)
        if s in ("121", "222"):
            prov.append(Step("pixley-isomer", f"chi={s}", f))
            h = pixley_isomer(f)
            prov.append(Step("pixley-isomer-result", "isomer with chi=211", h))
            m = majority_from_pixley(h)
            prov.append(Step("majority-from-pixley", "h(x1, h(x1,x2,x3), x3) is a majority", m))
            return done(TypeTag.T3_MAJORITY, m)
        if s == "211":
            prov.append(Step("pixley", "chi=211", f))
            m = majority_from_pixley(f)
            prov.append(Step("majority-from-pixley", "h(x1, h(x1,x2,x3), x3) is a majority", m))
            return done(TypeTag.T3_MAJORITY, m)
        if s != "221":
            raise GuaranteeFailed(f"chi={s} member escaped the semiprojection/majority scan",
                                   provenance=prov, operation=f)

    if cap < 4:
        return inconclusive(ClosureLimitExceeded(frag3, "the minority case needs arity 4 (cap < 4)"))
    frag4 = clone.fragment(4)
    semi = next((f for f in frag4.members
                 if is_projection(f) is None and is_semiprojection(f) is not None), None)
    if not exact:
        if semi is not None:
            prov.append(Step("semiprojection4", "quaternary semiprojection in the fragment"))
            return done(TypeTag.T4_SEMIPROJECTION, semi)
        for m in rest:
            try:
                G = extract_boolean_group(m, zero)
            except (GuaranteeFailed, ValueError):
                continue
            prov.append(Step("boolean-group", f"x + y = m(x, y, {zero}) is a Boolean group; m = x + y + z", m))
            return done(TypeTag.T5_BOOLEAN_GROUP, m, G)
        return inconclusive("only minorities at arity 3 and no group term found in a lower-bound closure")
    try:
        analysis = analyze_minority_clone(frag3, frag4)
    except ClosureLimitExceeded as exc:
        if semi is None:
            return inconclusive(exc)
        prov.append(Step("semiprojection4", "quaternary semiprojection in the fragment"))
        return done(TypeTag.T4_SEMIPROJECTION, semi)
    except GuaranteeFailed as exc:
        exc.provenance = prov + exc.provenance
        raise
    prov.extend(analysis.steps)
    if analysis.semiprojection4 is not None:
        prov.append(Step("semiprojection4", "quaternary semiprojection in the fragment"))
        return done(TypeTag.T4_SEMIPROJECTION, analysis.semiprojection4)
    try:
        G = extract_boolean_group(analysis.minority, zero)
    except GuaranteeFailed as exc:
        exc.provenance = prov + exc.provenance
        raise
    prov.append(Step("boolean-group", f"x + y = m(x, y, {zero}) is a Boolean group; m = x + y + z"))
    return done(TypeTag.T5_BOOLEAN_GROUP, analysis.minority, G)
