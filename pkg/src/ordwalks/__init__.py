"""Walks on countable ordinals and shift-increasing rational refinements.

The package splits into exact ordinal arithmetic (`ordinal`), the walk
distance functions rho and rhobar over pluggable ladder systems (`walks`),
enumerated rational metric spaces with crowding kernels (`qspace`), and the
backtracking construction tying them together (`refine`).  `cli` exposes all
of it as the `ordwalks` command.
"""

from .ordinal import (
    OMEGA,
    ONE,
    ZERO,
    Ordinal,
    OrdinalSyntaxError,
    classify,
    compare,
    from_int,
    from_terms,
    fund_seq,
    parse,
    render,
    universe,
)
from .qspace import (
    CrowdingCertificate,
    CrowdingFailure,
    RationalSpace,
    ball_members,
    crowding_check,
    in_ball,
    kernel,
)
from .refine import (
    InvalidLabeling,
    Labeling,
    RefinementResult,
    RefinementState,
    SearchExhausted,
    SearchStats,
    VerifyReport,
    candidates,
    implication_check,
    pair_code,
    pair_decode,
    refine,
    sigma,
    sigma_code,
    sigma_parent,
    verify_result,
)
from .walks import (
    CofinalityError,
    CSequence,
    CTrace,
    Fiber,
    TripleReport,
    UniverseSummary,
    c_trace,
    check_triple,
    check_universe,
    fiber,
    rho,
    rhobar,
    shift_chain_counterexample,
    walk_trace,
)

__version__ = "0.1.0"

__all__ = [
    "OMEGA",
    "ONE",
    "ZERO",
    "Ordinal",
    "OrdinalSyntaxError",
    "classify",
    "compare",
    "from_int",
    "from_terms",
    "fund_seq",
    "parse",
    "render",
    "universe",
    "CrowdingCertificate",
    "CrowdingFailure",
    "RationalSpace",
    "ball_members",
    "crowding_check",
    "in_ball",
    "kernel",
    "InvalidLabeling",
    "Labeling",
    "RefinementResult",
    "RefinementState",
    "SearchExhausted",
    "SearchStats",
    "VerifyReport",
    "candidates",
    "implication_check",
    "pair_code",
    "pair_decode",
    "refine",
    "sigma",
    "sigma_code",
    "sigma_parent",
    "verify_result",
    "CofinalityError",
    "CSequence",
    "CTrace",
    "Fiber",
    "TripleReport",
    "UniverseSummary",
    "c_trace",
    "check_triple",
    "check_universe",
    "fiber",
    "rho",
    "rhobar",
    "shift_chain_counterexample",
    "walk_trace",
    "__version__",
]
