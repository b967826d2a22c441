"""Shared fixtures: worked instances, an independent oracle, and a corpus.

The oracle here builds a full time expansion directly from the network
semantics using networkx, deliberately sharing no code with the package's
own expansion module, so agreement between the two is meaningful.
"""

from __future__ import annotations

import networkx as nx
import pytest

from tempoflow import (
    DemandVector,
    EdgeFn,
    InstanceSpec,
    PiecewiseConstFn,
    TemporalNetwork,
    generate_instance,
)

SUPER_SOURCE = ("__oracle_source__", -1)
SUPER_SINK = ("__oracle_sink__", -1)


def make_network(nodes, edges, sources, sinks, horizon) -> TemporalNetwork:
    """Build a network from {(i, j): (cap_pieces, tt_pieces or const)}."""
    built = {}
    for (i, j), (cap, tt) in edges.items():
        cap_fn = PiecewiseConstFn(tuple(cap))
        if isinstance(tt, int):
            tt_fn = PiecewiseConstFn.constant(tt, horizon)
        else:
            tt_fn = PiecewiseConstFn(tuple(tt))
        built[(i, j)] = EdgeFn(cap_fn, tt_fn)
    return TemporalNetwork(
        tuple(nodes), built, frozenset(sources), frozenset(sinks), horizon
    )


def build_e1() -> TemporalNetwork:
    """Single edge s -> d, capacity 0/1/0 on [0,0]/[1,2]/[3,3], travel time 1."""
    return make_network(
        ("s", "d"),
        {("s", "d"): ([(0, 0, 0), (1, 2, 1), (3, 3, 0)], 1)},
        {"s"},
        {"d"},
        3,
    )


def build_fig4() -> TemporalNetwork:
    """Three-node network where condensing with bad breakpoints loses the cut.

    All travel times 1, horizon 4; s -> b has capacity 1 only at t = 2 and
    b -> d only at t = 1, so nothing can get through (the relay b is
    reachable only after its outgoing edge has closed), yet the coarse
    partition {0}, [1,3], {4} merges the relevant times and shows a path.
    """
    return make_network(
        ("s", "b", "d"),
        {
            ("s", "b"): ([(0, 1, 0), (2, 2, 1), (3, 4, 0)], 1),
            ("b", "d"): ([(0, 0, 0), (1, 1, 1), (2, 4, 0)], 1),
        },
        {"s"},
        {"d"},
        4,
    )


def oracle_max_flow_over_time(net: TemporalNetwork, v: DemandVector | None = None):
    """Max flow over time via an independently built full expansion.

    With demands given, super terminals cap each source at -v(s) (time 0)
    and each sink at v(d) (time T); without demands, terminals are open.
    Infinite capacities are expressed by omitting the capacity attribute,
    which networkx treats as unbounded.
    """
    T = net.horizon
    g = nx.DiGraph()
    for i in net.nodes:
        for t in range(T):
            g.add_edge((i, t), (i, t + 1))  # no capacity attr = infinite
    for (i, j), fn in net.edges.items():
        for t in range(T + 1):
            u = fn.capacity(t)
            tau = fn.travel_time(t)
            if u == 0 or t + tau > T:
                continue
            arrive = ((j, t + tau))
            if g.has_edge((i, t), arrive):
                g[(i, t)][arrive]["capacity"] += u
            else:
                g.add_edge((i, t), arrive, capacity=u)
    for s in net.sources:
        if v is None:
            g.add_edge(SUPER_SOURCE, (s, 0))
        else:
            g.add_edge(SUPER_SOURCE, (s, 0), capacity=-v.get(s))
    for d in net.sinks:
        if v is None:
            g.add_edge((d, T), SUPER_SINK)
        else:
            g.add_edge((d, T), SUPER_SINK, capacity=v.get(d))
    value, _ = nx.maximum_flow(g, SUPER_SOURCE, SUPER_SINK)
    return value


def oracle_feasible(net: TemporalNetwork, v: DemandVector) -> bool:
    required = sum(d for d in v.values.values() if d > 0)
    return oracle_max_flow_over_time(net, v) >= required


def corpus_spec(rng) -> InstanceSpec:
    """One random draw of the small-instance parameter envelope."""
    sources = rng.randint(1, 2)
    sinks = rng.randint(1, 2)
    return InstanceSpec(
        n_nodes=rng.randint(max(2, sources + sinks), 6),
        n_sources=sources,
        n_sinks=sinks,
        n_edges=rng.randint(1, 8),
        horizon=rng.randint(1, 12),
        max_capacity=4,
        max_travel_time=3,
        max_pieces=3,
        demand_mode=rng.choice(("feasible", "random")),
    )


@pytest.fixture(scope="session")
def corpus():
    """500 seeded random balanced instances inside the small envelope."""
    import random

    rng = random.Random(20260823)
    return [generate_instance(corpus_spec(rng), seed) for seed in range(500)]


@pytest.fixture
def e1():
    return build_e1()


@pytest.fixture
def fig4():
    return build_fig4()
