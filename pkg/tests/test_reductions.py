import pytest

from tempoflow import (
    DemandVector,
    ModelError,
    StructuralError,
    attach_super_terminals,
    canonical_reduction,
    classify_roles,
    hoppe_tardos_star,
    to_one_shot,
)
from tempoflow.model import INF
from tempoflow.reductions import (
    SINK_ROLE_TAGS,
    SOURCE_ROLE_TAGS,
    ROLE_T_MINUS2,
)

from conftest import build_e1, make_network


def reduce_e1(v):
    net = build_e1()
    one_shot, _ = to_one_shot(net)
    return hoppe_tardos_star(one_shot, 3, v)


def test_gadget_shape():
    reduced, T, v2, trace = reduce_e1(DemandVector({"s": -2, "d": 2}))
    assert T == 3
    # one 8-node gadget plus the two original nodes
    assert len(reduced.nodes) == 10
    assert len(reduced.edges) == 9
    assert reduced.is_static()


def test_gadget_demands():
    _, _, v2, _ = reduce_e1(DemandVector({"s": -2, "d": 2}))
    # window [1, 2], u = 1: first-stage pair moves u(beta - alpha + 1) = 2,
    # second-stage pair moves u(T + 1) = 4; originals keep their demands.
    assert v2.get("s") == -2 and v2.get("d") == 2
    assert v2.get("s+:s:d") == -2 and v2.get("s-:s:d") == 2
    assert v2.get("s2+:s:d") == -4 and v2.get("s2-:s:d") == 4
    assert v2.total() == 0


def test_gadget_roles_classified():
    reduced, T, v2, trace = reduce_e1(DemandVector({"s": -2, "d": 2}))
    canon = canonical_reduction(reduced, T, v2, trace)
    for node, role in trace.roles.items():
        if role.tag in SOURCE_ROLE_TAGS:
            assert node in canon.ps_plus
        if role.tag in SINK_ROLE_TAGS:
            assert node in canon.ps_minus
        if role.tag == ROLE_T_MINUS2:
            assert node in canon.pps_minus
    assert canon.pps_minus  # the second-stage junction is a pseudo-pseudosink


def test_infinite_capacity_rejected():
    net = make_network(
        ("s", "d"), {("s", "d"): ([(0, 3, INF)], 1)}, {"s"}, {"d"}, 3
    )
    one_shot, _ = to_one_shot(net)
    with pytest.raises(ModelError):
        hoppe_tardos_star(one_shot, 3, DemandVector({"s": -1, "d": 1}))


def test_attach_super_terminals_windows():
    net = build_e1()
    v = DemandVector({"s": -2, "d": 2})
    full = attach_super_terminals(net, v)
    star = full.edges[("s*", "s")]
    assert star.capacity(0) == 2 and star.capacity(1) == 0
    drain = full.edges[("d", "d*")]
    assert drain.capacity(3) == 2 and drain.capacity(2) == 0


def test_degenerate_terminal_chain_rejected():
    # s* -> a -> d* makes a both pseudosource and pseudosink
    from tempoflow import EdgeFn, PiecewiseConstFn, TemporalNetwork

    def one_shot_edge(t, cap, T):
        pieces = []
        if t > 0:
            pieces.append((0, t - 1, 0))
        pieces.append((t, t, cap))
        if t < T:
            pieces.append((t + 1, T, 0))
        return EdgeFn(PiecewiseConstFn(tuple(pieces)), PiecewiseConstFn.constant(0, T))

    bad = TemporalNetwork(
        ("s*", "a", "d*"),
        {("s*", "a"): one_shot_edge(0, 1, 3), ("a", "d*"): one_shot_edge(3, 1, 3)},
        frozenset({"s*"}),
        frozenset({"d*"}),
        3,
    )
    with pytest.raises(StructuralError):
        classify_roles(bad)


def test_feasibility_preserved_by_reduction(corpus):
    """Gadget reduction preserves the TEN-oracle verdict (spot check)."""
    from tempoflow import build_ten, max_flow
    from tempoflow.reductions import attach_super_terminals as attach

    for parsed in corpus[:40]:
        net, v = parsed.network, parsed.demands
        required = sum(x for x in v.values.values() if x > 0)
        direct, _ = max_flow(build_ten(attach(net, v)))
        one_shot, _ = to_one_shot(net)
        reduced, T, v2, trace = hoppe_tardos_star(one_shot, net.horizon, v)
        required2 = sum(x for x in v2.values.values() if x > 0)
        value2, _ = max_flow(build_ten(attach(reduced, v2)))
        assert (direct >= required) == (value2 >= required2)
