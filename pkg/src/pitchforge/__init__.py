"""Exact pitch-bounded lift-and-project toolkit for small 0/1 systems.

Square-free polynomial algebra, indicator spanning families, moment-style
relaxation LPs with a certified exact solver, nonnegativity certificates,
and rounding-cut experiments — everything over rationals, end to end.
"""

from .certify import (
    CertTerm,
    Certificate,
    ConicCombo,
    Core,
    build_cover_certificate,
    certificate_from_json,
    certificate_residual,
    certificate_to_json,
    find_core,
    full_interpolation_certificate,
    packing_certificate,
    symmetric_knapsack_certificate,
    verify_certificate,
)
from .cgtools import (
    CGCut,
    ClosureReport,
    closure_experiment,
    closure_report_to_json,
    enumerate_cg_cuts,
    iterated_cg_cuts,
    scale_solution,
)
from .config import Limits, current_limits, parse_limits_spec
from .errors import (
    CertificateError,
    InfeasibleRestrictionError,
    InvalidInputError,
    LPError,
    PitchforgeError,
    SizeGuardError,
    VerificationError,
)
from .instances import (
    CoverInstance,
    KnapsackInstance,
    LinearInequality,
    PackingInstance,
    enumerate_valid_inequalities,
    feasible_masks,
    feasible_points,
    gen_full_circulant,
    gen_random_cover,
    gen_random_packing,
    gen_symmetric_knapsack,
    inequality_from_json,
    inequality_to_json,
    instance_from_json,
    instance_to_json,
    is_valid,
    minimalize,
    pitch,
    restrict_instance,
)
from .polyalg import (
    DeltaProduct,
    MultilinearPoly,
    PartialAssignment,
    SingleDelta,
    SymmetricSum,
    TRIVIAL_DELTA,
    delta,
    delta_value,
    expand,
    poly_from_json,
    poly_to_json,
    structured_from_json,
    structured_to_json,
)
from .relax import (
    Functional,
    MomentBasis,
    RelaxationLP,
    build_moment_basis,
    build_sa_lp,
    build_standard_sa,
    cardinality_indicators,
    check_inequality,
    lp_to_json,
    lp_to_text,
    optimize,
)
from .simplex import LPResult, StandardLP, feasibility, solve
from .spanning import (
    CoreFamily,
    SpanMember,
    SpanningSet,
    build_spanning_set,
    core_family,
    overlap_set,
    spanning_size,
    spanning_to_json,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
