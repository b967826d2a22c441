"""End-to-end solvers: feasibility, quickest horizon, max flow over time.

Verdicts and optimal values come from the condensed-expansion fast path;
witness flows come from a max flow on the full expansion of the original
network with super terminals attached, which is exact but only available
at oracle scale (the expansion is gated by a size budget).
"""

from __future__ import annotations

from .model import (
    INF,
    DemandVector,
    FlowOverTime,
    ModelError,
    TemporalNetwork,
    to_one_shot,
)
from .reductions import (
    D_STAR,
    S_STAR,
    attach_super_terminals,
    canonical_reduction,
    hoppe_tardos_star,
)
from .breakpoints import cten_breakpoints
from .expansion import DEFAULT_TEN_BUDGET, OracleBudgetError, build_cten, build_ten
from .maxflow import max_flow
from .feasibility import FeasOutcome, feas


class BoundedSearchError(ModelError):
    """The quickest search hit its horizon cap while still infeasible."""


def dttn_feasible(net: TemporalNetwork, horizon: int, v: DemandVector) -> FeasOutcome:
    """Feasibility of a dynamic transshipment on a temporal network."""
    if v.total() != 0:
        raise ModelError(f"total demand must be 0, got {v.total()}")
    v.check_against(net)
    one_shot, _ = to_one_shot(net, horizon)
    reduced, _, v2, trace = hoppe_tardos_star(one_shot, horizon, v)
    return feas(reduced, horizon, v2, trace)


def _at_horizon(net: TemporalNetwork, horizon: int) -> TemporalNetwork:
    """The same network truncated or extended to a different horizon."""
    from .model import EdgeFn, PiecewiseConstFn

    def clip(fn: PiecewiseConstFn) -> PiecewiseConstFn:
        pieces = []
        for (a, b, val) in fn.pieces:
            if a > horizon:
                break
            pieces.append((a, min(b, horizon), val))
        last = pieces[-1]
        if last[1] < horizon:
            pieces[-1] = (last[0], horizon, last[2])
        return PiecewiseConstFn(tuple(pieces))

    edges = {
        e: EdgeFn(clip(fn.capacity), clip(fn.travel_time)) for e, fn in net.edges.items()
    }
    return TemporalNetwork(net.nodes, edges, net.sources, net.sinks, horizon)


def quickest_transshipment(
    net: TemporalNetwork, v: DemandVector, horizon_cap: int
) -> tuple[int, FlowOverTime | None]:
    """Least horizon at which the transshipment is feasible, with a witness.

    Exponential search doubles the probe until feasible, then binary
    search closes the range; feasibility is monotone in the horizon since
    a flow for T is a flow for T + 1.  Each probe rebuilds the reduction
    (it depends on the horizon).  The witness is extracted at oracle scale
    and is None when the full expansion exceeds its budget.
    """
    if v.total() != 0:
        raise ModelError(f"total demand must be 0, got {v.total()}")
    if horizon_cap < 0:
        raise ModelError("horizon cap must be non-negative")
    if all(d == 0 for d in v.values.values()):
        return 0, FlowOverTime({})

    def probe(T: int) -> bool:
        return dttn_feasible(_at_horizon(net, T), T, v).feasible

    lo, hi = 0, None
    t = 1
    while t <= horizon_cap:
        if probe(t):
            hi = t
            break
        lo = t
        t *= 2
    if hi is None:
        if t // 2 < horizon_cap and probe(horizon_cap):
            lo, hi = t // 2, horizon_cap
        else:
            raise BoundedSearchError(f"infeasible at every horizon up to {horizon_cap}")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if probe(mid):
            hi = mid
        else:
            lo = mid
    try:
        witness = extract_flow(_at_horizon(net, hi), hi, v)
    except OracleBudgetError:
        witness = None
    return hi, witness


def max_flow_over_time(
    net: TemporalNetwork, horizon: int, budget: int = DEFAULT_TEN_BUDGET
) -> tuple[int, FlowOverTime | None]:
    """Largest deliverable amount from the single source to the single sink.

    The gadget reduction is built with the terminal demand left open; on
    its canonical form the two terminal super edges get infinite capacity.
    One steady-state max flow F on the condensed expansion then gives the
    answer as F minus the total demand of the surrogate sinks (which is
    what the gadgets absorb regardless of the terminal demand).
    """
    if len(net.sources) != 1 or len(net.sinks) != 1:
        raise ModelError("max flow over time requires a single source and sink")
    s = next(iter(net.sources))
    d = next(iter(net.sinks))
    one_shot, _ = to_one_shot(net, horizon)
    zero = DemandVector({s: 0, d: 0})
    reduced, _, v2, trace = hoppe_tardos_star(one_shot, horizon, zero)
    surrogate_total = sum(
        val for node, val in v2.values.items() if node not in (s, d) and val > 0
    )
    canon = canonical_reduction(
        reduced, horizon, v2, trace, infinite_terminals=frozenset({s, d})
    )
    bps = cten_breakpoints(canon)
    value, _ = max_flow(build_cten(canon.net, bps))
    if value == INF:
        raise ModelError("unbounded flow in the open-demand construction")
    best = value - surrogate_total
    witness = None
    try:
        demands = DemandVector({s: -best, d: best})
        witness = extract_flow(net, horizon, demands, budget=budget)
    except OracleBudgetError:
        pass
    return best, witness


def extract_flow(
    net: TemporalNetwork,
    horizon: int,
    v: DemandVector,
    budget: int = DEFAULT_TEN_BUDGET,
) -> FlowOverTime:
    """An integral flow meeting the demands, from the full expansion.

    Attaches super terminals to the original network, solves the full
    expansion, and reads departures off the inter-node arcs (holdover arcs
    are storage and stay implicit).
    """
    if v.total() != 0:
        raise ModelError(f"total demand must be 0, got {v.total()}")
    v.check_against(net)
    full = attach_super_terminals(_at_horizon(net, horizon), v)
    graph = build_ten(full, budget=budget)
    required = sum(d for d in v.values.values() if d > 0)
    value, flow = max_flow(graph)
    if value < required:
        raise ModelError(
            f"instance is infeasible (flow {value} < demand {required}); no witness exists"
        )
    flows: dict[tuple[tuple[str, str], int], int] = {}
    for k, arc in enumerate(graph.arcs):
        amount = flow.arc_flows[k]
        if amount <= 0:
            continue
        (i, (t, _)), (j, _) = graph.label(arc.tail), graph.label(arc.head)
        if i == j:
            continue
        if S_STAR in (i, j) or D_STAR in (i, j):
            continue
        key = ((i, j), t)
        flows[key] = flows.get(key, 0) + amount
    return FlowOverTime(flows)
