"""Exact twist-operator calculus and the skein algebra of the one-holed torus."""

from .coeff import (
    LaurentPoly,
    RationalFunction,
    laurent_A,
    parse_laurent,
    parse_rational,
    rf,
)
from .errors import (
    BudgetExceeded,
    DegreeTooHigh,
    DivisionByZero,
    InvalidIndex,
    MixedSystems,
    NotPrimitive,
    ParseError,
    SkeinError,
    WrongSystem,
)
from .freealg import (
    NCPolynomial,
    OperatorWord,
    Presentation,
    TwistSystem,
    a_commutator,
    apply_operator_word,
    apply_twist,
    coxeter_relators,
    relator_elements,
    torus_mcg_presentation,
    two_generator_system,
)
from .quotient import (
    IdealSpan,
    MembershipResult,
    WordImplicationProof,
    build_span,
    expand_certificate,
    flat_certificate,
    member,
    prove_word_implication,
    reduce,
    verify_certificate,
    verify_word_implication,
)
from .torus import (
    Curve,
    TorusElement,
    boundary_element,
    curve_element,
    element_x,
    element_y,
    element_z,
    equivariance_check,
    euclid_twist_word,
    intersection,
    nf_reduce,
    nf_reduce_random,
    psi,
    set_memoization,
    t_mul,
    twist_auto,
    twist_word_auto,
    witness,
    witness_boundary,
)
from .fmt import (
    canonical_json,
    format_curve,
    format_nc,
    format_torus,
    format_twist_word,
    parse_curve,
    parse_nc,
    parse_torus,
    parse_twist_word,
)

__version__ = "0.1.0"

__all__ = [
    "LaurentPoly",
    "RationalFunction",
    "laurent_A",
    "parse_laurent",
    "parse_rational",
    "rf",
    "SkeinError",
    "DivisionByZero",
    "MixedSystems",
    "InvalidIndex",
    "DegreeTooHigh",
    "BudgetExceeded",
    "WrongSystem",
    "NotPrimitive",
    "ParseError",
    "NCPolynomial",
    "OperatorWord",
    "Presentation",
    "TwistSystem",
    "a_commutator",
    "apply_operator_word",
    "apply_twist",
    "coxeter_relators",
    "relator_elements",
    "torus_mcg_presentation",
    "two_generator_system",
    "IdealSpan",
    "MembershipResult",
    "WordImplicationProof",
    "build_span",
    "expand_certificate",
    "flat_certificate",
    "member",
    "prove_word_implication",
    "reduce",
    "verify_certificate",
    "verify_word_implication",
    "Curve",
    "TorusElement",
    "boundary_element",
    "curve_element",
    "element_x",
    "element_y",
    "element_z",
    "equivariance_check",
    "euclid_twist_word",
    "intersection",
    "nf_reduce",
    "nf_reduce_random",
    "psi",
    "set_memoization",
    "t_mul",
    "twist_auto",
    "twist_word_auto",
    "witness",
    "witness_boundary",
    "canonical_json",
    "format_curve",
    "format_nc",
    "format_torus",
    "format_twist_word",
    "parse_curve",
    "parse_nc",
    "parse_torus",
    "parse_twist_word",
    "__version__",
]
