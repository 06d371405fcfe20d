"""Numerical simple choreographies of the planar equal-mass N-body problem.

Find, classify and verify single-curve periodic orbits by minimizing the
Lagrangian action over symmetry-reduced loops under sign and monotonicity
constraints, and reproduce the combinatorial count of orbit classes.
"""

from .action import (
    ActionBreakdown,
    CollisionAtNodeError,
    PotentialConfig,
    action,
    coercivity_check,
    gradient,
    ngon_action_exact,
    ngon_fundamental_path,
    ngon_radius,
)
from .census import (
    OrbitClass,
    SignVector,
    count_burnside,
    count_formula,
    enumerate_classes,
    hn_admissible,
    negate,
    orbit,
    star,
)
from .constraints import (
    ConstraintConfig,
    FeasibilityReport,
    check_boundary,
    check_monotone,
    check_topological,
    feasibility_report,
    project_feasible,
    project_monotone,
    project_topological,
    recenter,
)
from .loop_model import (
    FullLoop,
    FundamentalPath,
    from_dofs,
    path_from_dict,
    path_to_dict,
    resample,
    seed,
    to_dofs,
)
from .optimizer import (
    MultistartOutcome,
    SolveConfig,
    SolveResult,
    minimize,
    multistart,
    refine,
)
from .symmetry import (
    GroupElementAction,
    apply,
    body_position,
    compose,
    dn_generators,
    evaluate_z0,
    hn_symmetrize,
    identity_action,
    reconstruct,
)
from .verify import (
    VerificationReport,
    VerifyThresholds,
    bubble_count,
    count_transversal_crossings,
    crossing_counts,
    el_residual,
    hn_identities,
    integrate_return,
    sign_pattern,
    strict_monotone_and_velocity,
    sundman_diagnostic,
    verify_candidate,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
