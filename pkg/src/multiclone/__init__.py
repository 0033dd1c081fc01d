"""Multioperations on small finite universes: composition, clone fragments, classification."""

from .classifiers import (
    ChiTriple,
    SemiprojectionCounterexample,
    TernaryCase,
    chi_triple,
    classify_chi,
    is_idempotent,
    is_majority,
    is_maltsev,
    is_minority,
    is_pixley,
    is_projection,
    is_semiprojection,
    is_totally_symmetric,
    semiprojection_check,
)
from .closure import (
    DEFAULT_LIMIT,
    BooleanGroup,
    CloneFragment,
    ClosureLimitExceeded,
    GeneratorSet,
    LazyClone,
    close_fixed_arity,
    close_joint,
    compose,
    fg_generators,
    fg_membership,
    fg_slice,
    fragment_equals_projections,
    is_partial_family,
)
from .core import (
    DEFAULT_CAP,
    MAX_ARITY,
    MAX_UNIVERSE,
    MultiOp,
    OpKind,
    Universe,
    evaluate,
    identify,
    isomer,
    is_operation,
    kind,
    make_constant,
    make_empty,
    make_projection,
    minors,
    projections,
)
from .fivetype import (
    Step,
    GuaranteeFailed,
    TypeTag,
    TypeWitness,
    analyze_minority_clone,
    pixley_isomer,
    majority_from_pixley,
    classify_five_type,
    extract_boolean_group,
    minimal_violation,
    verify_cancellation,
    verify_fixed_point_rule,
    verify_involutions,
)
from .opfile import OpFileError, emit_opfile, emit_single, parse_opfile
from .projection import (
    ConditionI,
    ProjectionPropertyReport,
    Verdict,
    check_condition_i,
    check_condition_ii,
    enumerate_boolean_groups,
    collapse_projection_test,
    projection_property_equivalence,
)

__version__ = "0.1.0"
