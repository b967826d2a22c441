"""Gadget reduction to a static network and the canonical super-terminal form.

Each one-shot edge x -> y with window [alpha, beta], capacity u and travel
time tau is replaced by a static eight-node gadget.  The first stage turns
the window into a path: a surrogate source that must start feeding at
alpha, the edge's travel time, and a surrogate sink whose collection node
sits T - beta away.  The second stage re-gadgets the collection edge so
that every surrogate-source-to-surrogate-sink path has length alpha or
T - beta.

A crucial detail is that both second-stage junction nodes are kept.  The
second-stage source emits u * (T + 1) units through a single capacity-u
zero-length edge, which forces it to emit exactly u per time step; dually
the second-stage sink absorbs exactly u per step.  These forced full-rate
streams are what couple "x diverts a unit into the collector" to "the
surrogate source has already banked a matching unit", which is exactly the
schedule-exchange argument that makes the reduction feasibility-preserving.
Collapsing either junction away breaks the per-step rate limit and with it
the equivalence (a unit could be diverted before its replacement is
available).
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import (
    INF,
    DemandVector,
    EdgeFn,
    ModelError,
    OneShotNetwork,
    FlowOverTime,
    PiecewiseConstFn,
    TemporalNetwork,
    check_width,
)

S_STAR = "s*"
D_STAR = "d*"


class StructuralError(ModelError):
    """A network violates the structural conditions of its declared shape."""


@dataclass(frozen=True)
class NodeRole:
    """What a node of a reduced network stands for.

    ``edge`` names the originating one-shot edge for gadget-internal nodes.
    """

    tag: str
    edge: tuple[str, str] | None = None


ROLE_ORIGINAL = "original"
ROLE_GADGET_SOURCE = "gadget-source"
ROLE_GADGET_SINK = "gadget-sink"
ROLE_GADGET_SOURCE2 = "gadget-source2"
ROLE_GADGET_SINK2 = "gadget-sink2"
ROLE_T_PLUS = "t-plus"
ROLE_T_MINUS = "t-minus"
ROLE_T_PLUS2 = "t-plus2"
ROLE_T_MINUS2 = "t-minus2"
ROLE_SUPER_SOURCE = "super-source"
ROLE_SUPER_SINK = "super-sink"

SOURCE_ROLE_TAGS = {ROLE_GADGET_SOURCE, ROLE_GADGET_SOURCE2}
SINK_ROLE_TAGS = {ROLE_GADGET_SINK, ROLE_GADGET_SINK2}


@dataclass(frozen=True)
class ReductionTrace:
    """Origin of every element of a reduced network.

    ``node_origin`` maps each node to ``("original", id)`` or
    ``("gadget", (x, y))``; ``gadget_params`` stores the per-edge window
    constants ``(alpha, beta, u, tau)`` so later stages never re-derive
    them.
    """

    node_origin: dict[str, tuple[str, object]]
    gadget_params: dict[tuple[str, str], tuple[int, int, int, int]]
    roles: dict[str, NodeRole]


def _gadget_names(x: str, y: str) -> dict[str, str]:
    return {
        "s+": f"s+:{x}:{y}",
        "t+": f"t+:{x}:{y}",
        "t-": f"t-:{x}:{y}",
        "s-": f"s-:{x}:{y}",
        "s2+": f"s2+:{x}:{y}",
        "t2+": f"t2+:{x}:{y}",
        "t2-": f"t2-:{x}:{y}",
        "s2-": f"s2-:{x}:{y}",
    }


def hoppe_tardos_star(
    net: OneShotNetwork, horizon: int, v: DemandVector
) -> tuple[TemporalNetwork, int, DemandVector, ReductionTrace]:
    """Replace each one-shot edge with its static gadget.

    The surrogate terminals of the gadget for edge xy receive demands
    -u(beta - alpha + 1) / +u(beta - alpha + 1) (first stage) and
    -u(T + 1) / +u(T + 1) (second stage); original terminals keep their
    demands, so the total stays zero.
    """
    T = horizon
    if T != net.horizon:
        raise ModelError("horizon must match the one-shot network")
    if v.total() != 0:
        raise ModelError(f"total demand must be 0, got {v.total()}")
    v.check_against(net.as_temporal())

    nodes = list(net.nodes)
    existing = set(nodes)
    edges: dict[tuple[str, str], EdgeFn] = {}
    demands = {t: v.get(t) for t in sorted(net.sources | net.sinks)}
    node_origin: dict[str, tuple[str, object]] = {n: ("original", n) for n in net.nodes}
    roles: dict[str, NodeRole] = {n: NodeRole(ROLE_ORIGINAL) for n in net.nodes}
    gadget_params: dict[tuple[str, str], tuple[int, int, int, int]] = {}
    sources = set(net.sources)
    sinks = set(net.sinks)

    def static(u, tau) -> EdgeFn:
        return EdgeFn(
            PiecewiseConstFn.constant(u, T), PiecewiseConstFn.constant(tau, T)
        )

    for (x, y), e in net.edges.items():
        if e.capacity == INF:
            raise ModelError(
                f"edge ({x}, {y}): infinite capacity cannot be gadget-reduced "
                "(the surrogate demands would be infinite)"
            )
        u, tau, alpha, beta = e.capacity, e.travel_time, e.alpha, e.beta
        check_width(u * (T + 1), f"gadget demand for edge ({x}, {y})")
        names = _gadget_names(x, y)
        clash = set(names.values()) & existing
        if clash:
            raise ModelError(f"node ids {sorted(clash)} are reserved for the reduction")
        existing.update(names.values())
        nodes.extend(names.values())
        for short, role_tag in (
            ("s+", ROLE_GADGET_SOURCE),
            ("t+", ROLE_T_PLUS),
            ("t-", ROLE_T_MINUS),
            ("s-", ROLE_GADGET_SINK),
            ("s2+", ROLE_GADGET_SOURCE2),
            ("t2+", ROLE_T_PLUS2),
            ("t2-", ROLE_T_MINUS2),
            ("s2-", ROLE_GADGET_SINK2),
        ):
            node = names[short]
            node_origin[node] = ("gadget", (x, y))
            roles[node] = NodeRole(role_tag, (x, y))
        gadget_params[(x, y)] = (alpha, beta, u, tau)

        edges[(names["s+"], names["t+"])] = static(u, alpha)
        edges[(names["t+"], y)] = static(u, tau)
        edges[(names["t+"], names["t-"])] = static(u, 0)
        edges[(x, names["t-"])] = static(u, 0)
        edges[(names["t-"], names["t2-"])] = static(u, 0)
        edges[(names["s2+"], names["t2+"])] = static(u, 0)
        edges[(names["t2+"], names["s-"])] = static(u, T - beta)
        edges[(names["t2+"], names["t2-"])] = static(u, 0)
        edges[(names["t2-"], names["s2-"])] = static(u, 0)

        demands[names["s+"]] = -u * (beta - alpha + 1)
        demands[names["s-"]] = u * (beta - alpha + 1)
        demands[names["s2+"]] = -u * (T + 1)
        demands[names["s2-"]] = u * (T + 1)
        sources.update((names["s+"], names["s2+"]))
        sinks.update((names["s-"], names["s2-"]))

    reduced = TemporalNetwork(
        tuple(nodes), edges, frozenset(sources), frozenset(sinks), T
    )
    return reduced, T, DemandVector(demands), ReductionTrace(node_origin, gadget_params, roles)


@dataclass(frozen=True)
class CanonicalTemporalNetwork:
    """Single super-source/super-sink network per the canonical shape.

    Inner edges are static; the s*-edges are live only at time 0 and the
    d*-edges only at time T, all with travel time 0.
    """

    net: TemporalNetwork
    s_star: str
    d_star: str
    roles: dict[str, NodeRole]
    ps_plus: frozenset[str]
    ps_minus: frozenset[str]
    pps_minus: frozenset[str]
    trace: ReductionTrace | None

    @property
    def horizon(self) -> int:
        return self.net.horizon


def attach_super_terminals(
    net: TemporalNetwork,
    v: DemandVector,
    infinite_terminals: frozenset[str] = frozenset(),
) -> TemporalNetwork:
    """Add s* and d* with one-shot edges at times 0 and T respectively.

    The s*-edge to a source s has capacity -v(s) at time 0 only; the
    d*-edge from a sink d has capacity v(d) at time T only.  Terminals in
    ``infinite_terminals`` get infinite capacity instead (used for the
    maximum-flow-over-time construction, where the terminal demand is the
    unknown).
    """
    T = net.horizon
    if S_STAR in net.nodes or D_STAR in net.nodes:
        raise ModelError(f"node ids {S_STAR!r}/{D_STAR!r} are reserved")
    for s in net.sources:
        if v.get(s) > 0:
            raise ModelError(f"source {s} has positive demand")
    for d in net.sinks:
        if v.get(d) < 0:
            raise ModelError(f"sink {d} has negative demand")

    def one_shot_cap(active_t: int, value) -> PiecewiseConstFn:
        pieces = []
        if active_t > 0:
            pieces.append((0, active_t - 1, 0))
        pieces.append((active_t, active_t, value))
        if active_t < T:
            pieces.append((active_t + 1, T, 0))
        return PiecewiseConstFn(tuple(pieces))

    zero_tt = PiecewiseConstFn.constant(0, T)
    edges = dict(net.edges)
    for s in sorted(net.sources):
        cap = INF if s in infinite_terminals else -v.get(s)
        edges[(S_STAR, s)] = EdgeFn(one_shot_cap(0, cap), zero_tt)
    for d in sorted(net.sinks):
        cap = INF if d in infinite_terminals else v.get(d)
        edges[(d, D_STAR)] = EdgeFn(one_shot_cap(T, cap), zero_tt)
    return TemporalNetwork(
        net.nodes + (S_STAR, D_STAR),
        edges,
        frozenset({S_STAR}),
        frozenset({D_STAR}),
        T,
    )


def classify_roles(
    net: TemporalNetwork, s_star: str = S_STAR, d_star: str = D_STAR
) -> tuple[frozenset[str], frozenset[str], frozenset[str]]:
    """Compute pseudosources, pseudosinks, and pseudo-pseudosinks from topology.

    Structural conditions are enforced: a pseudosource has no in-edge other
    than its s*-edge, a pseudosink no out-edge other than its d*-edge, and
    the two sets are disjoint.  A pseudo-pseudosink has exactly one
    out-edge (to a pseudosink), exactly two in-edges, all incident edges
    with travel time 0 and capacity equal to the out-edge's.
    """
    in_edges: dict[str, list[tuple[str, str]]] = {n: [] for n in net.nodes}
    out_edges: dict[str, list[tuple[str, str]]] = {n: [] for n in net.nodes}
    for (i, j) in net.edges:
        out_edges[i].append((i, j))
        in_edges[j].append((i, j))

    ps_plus, ps_minus = set(), set()
    for (i, j) in net.edges:
        if i == s_star:
            others = [e for e in in_edges[j] if e[0] != s_star]
            if others:
                raise StructuralError(f"pseudosource {j} has extra in-edge {others[0]}")
            ps_plus.add(j)
        if j == d_star:
            others = [e for e in out_edges[i] if e[1] != d_star]
            if others:
                raise StructuralError(f"pseudosink {i} has extra out-edge {others[0]}")
            ps_minus.add(i)
    overlap = ps_plus & ps_minus
    if overlap:
        raise StructuralError(
            f"node {sorted(overlap)[0]} is both pseudosource and pseudosink"
        )

    def const(fn: PiecewiseConstFn):
        return fn.pieces[0][2] if fn.is_constant() else None

    pps_minus = set()
    for i in net.nodes:
        if i in ps_plus or i in ps_minus or i in (s_star, d_star):
            continue
        if len(out_edges[i]) != 1 or len(in_edges[i]) != 2:
            continue
        out = out_edges[i][0]
        if out[1] not in ps_minus:
            continue
        out_cap = const(net.edges[out].capacity)
        incident = in_edges[i] + [out]
        if out_cap is None:
            continue
        if all(
            const(net.edges[e].capacity) == out_cap
            and const(net.edges[e].travel_time) == 0
            for e in incident
        ):
            pps_minus.add(i)
    return frozenset(ps_plus), frozenset(ps_minus), frozenset(pps_minus)


def canonical_reduction(
    net: TemporalNetwork,
    horizon: int,
    v: DemandVector,
    trace: ReductionTrace | None = None,
    infinite_terminals: frozenset[str] = frozenset(),
) -> CanonicalTemporalNetwork:
    """Attach super terminals to a static network and classify node roles."""
    if horizon != net.horizon:
        raise ModelError("horizon must match the network")
    if not net.is_static():
        raise ModelError("canonical reduction requires a static inner network")
    if not infinite_terminals and v.total() != 0:
        raise ModelError(f"total demand must be 0, got {v.total()}")
    full = attach_super_terminals(net, v, infinite_terminals)
    ps_plus, ps_minus, pps_minus = classify_roles(full)
    roles = dict(trace.roles) if trace is not None else {
        n: NodeRole(ROLE_ORIGINAL) for n in net.nodes
    }
    roles[S_STAR] = NodeRole(ROLE_SUPER_SOURCE)
    roles[D_STAR] = NodeRole(ROLE_SUPER_SINK)
    return CanonicalTemporalNetwork(
        full, S_STAR, D_STAR, roles, ps_plus, ps_minus, pps_minus, trace
    )


def project_flow_from_canonical(
    canon: CanonicalTemporalNetwork, g: FlowOverTime
) -> FlowOverTime:
    """Drop the super terminals from a saturating canonical flow.

    Requires every s*-edge to carry its full capacity at time 0 (a partial
    flow has no well-defined projection).
    """
    T = canon.horizon
    for (i, j), fn in canon.net.edges.items():
        if i == canon.s_star:
            cap = fn.capacity(0)
            if cap != INF and g.amount((i, j), 0) != cap:
                raise ModelError(
                    f"flow does not saturate the edge to {j} "
                    f"({g.amount((i, j), 0)} of {cap})"
                )
    flows = {
        (edge, t): a
        for (edge, t), a in g.flows.items()
        if canon.s_star not in edge and canon.d_star not in edge and a > 0
    }
    return FlowOverTime(flows)
