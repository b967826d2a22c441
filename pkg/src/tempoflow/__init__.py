"""Dynamic transshipments on temporal networks via condensed time expansion.

Feasibility, quickest-horizon, and max-flow-over-time solvers whose
running time is independent of the time horizon, together with a full
time-expanded-network oracle and a minimum-cut structure laboratory used
to verify the condensation machinery.
"""

from .model import (
    INF,
    MAX_INT,
    DemandVector,
    DomainError,
    EdgeFn,
    FlowOverTime,
    ModelError,
    OneShotEdge,
    OneShotNetwork,
    OneShotTrace,
    OverflowRejection,
    PiecewiseConstFn,
    TemporalNetwork,
    ValidationReport,
    Violation,
    compute_mu,
    merged_pieces,
    net_flow,
    project_one_shot_flow,
    to_one_shot,
    validate_flow,
)
from .reductions import (
    CanonicalTemporalNetwork,
    NodeRole,
    ReductionTrace,
    StructuralError,
    attach_super_terminals,
    canonical_reduction,
    classify_roles,
    hoppe_tardos_star,
    project_flow_from_canonical,
)
from .breakpoints import (
    EnumerationCapError,
    cten_breakpoints,
    gamma_enumerate,
    gamma_star,
)
from .expansion import (
    DEFAULT_TEN_BUDGET,
    Arc,
    ExpandedGraph,
    IntervalPartition,
    OracleBudgetError,
    build_cten,
    build_ten,
    cten_edge_capacity,
    intervals_of,
)
from .maxflow import (
    InternalConsistencyError,
    SteadyFlow,
    UnboundedFlowError,
    check_max_flow,
    cut_capacity,
    max_flow,
    residual_reachable,
)
from .feasibility import (
    FeasOutcome,
    capacity_oT,
    feas,
    restrict_for_set,
    verify_violated,
)
from .cutlab import (
    CutFunction,
    PinnedGraph,
    canonicalize_min_cut,
    cut_cost,
    forbidden_set,
    min_cut_times,
    pinned_graph,
    shift_cut,
)
from .solvers import (
    BoundedSearchError,
    dttn_feasible,
    extract_flow,
    max_flow_over_time,
    quickest_transshipment,
)
from .netio import (
    InstanceSpec,
    ParsedInstance,
    ParseError,
    generate_instance,
    parse_flow,
    parse_network,
    serialize_flow,
    serialize_network,
)

__version__ = "0.1.0"
