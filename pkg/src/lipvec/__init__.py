"""Exact computations with pseudo-seminorms, gauges and Lipschitz structures on R^d."""
from .numkernel import INF, LinearProgram, Rat, lp_feasible, lp_minimize, span_membership
from .sets import (
    BalancedPolytope,
    CircledSet,
    SumExpression,
    included_in_convex,
    included_in_sampled,
    member,
    scale,
    sum_member,
)
from .gauge import GaugeFunctional, domination_bound, gauge_eval, sup_over
from .metrization import (
    CircledChain,
    DyadicPseudoSeminorm,
    DyadicValue,
    chain_from_convex,
    check_axioms,
    check_sandwich,
    convex_chain_closed_form,
    dyadic_eval,
    scale_chain,
    validate_chain,
)
from .lipstruct import (
    ChainMetric,
    GaugeMetric,
    LipschitzStructure,
    ScaledMetric,
    SupMetric,
    dominates,
    eval_metric,
    generate_structure,
    product_structure,
    structure_contains,
)
from .veccheck import (
    MapSpec,
    check_addition,
    check_map,
    check_scalar_mult,
    check_scalar_mult_chain,
    local_constants,
)
from .bornology import BoundedDisk, check_bornological, check_disk_domination, disk_structure

__version__ = "0.1.0"
