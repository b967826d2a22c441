import pytest

from tempoflow import (
    DemandVector,
    ModelError,
    capacity_oT,
    dttn_feasible,
    feas,
    hoppe_tardos_star,
    restrict_for_set,
    to_one_shot,
    verify_violated,
)
from tempoflow.model import INF

from conftest import build_e1


def reduced_e1(v):
    one_shot, _ = to_one_shot(build_e1())
    return hoppe_tardos_star(one_shot, 3, v)


def test_zero_demand_feasible():
    reduced, T, v2, trace = reduced_e1(DemandVector({"s": 0, "d": 0}))
    assert feas(reduced, T, v2, trace).feasible


def test_e1_two_units_feasible():
    reduced, T, v2, trace = reduced_e1(DemandVector({"s": -2, "d": 2}))
    outcome = feas(reduced, T, v2, trace)
    assert outcome.feasible
    assert outcome.serialize() == "FEASIBLE"


def test_e1_three_units_infeasible_with_certificate():
    reduced, T, v2, trace = reduced_e1(DemandVector({"s": -3, "d": 3}))
    outcome = feas(reduced, T, v2, trace)
    assert not outcome.feasible
    assert outcome.violated and "s" in outcome.violated
    assert outcome.o_T < outcome.neg_v
    assert verify_violated(reduced, T, v2, outcome.violated, trace=trace)
    assert outcome.serialize().startswith("INFEASIBLE violated=")
    assert "<" not in outcome.serialize()


def test_feas_requires_trace():
    reduced, T, v2, _ = reduced_e1(DemandVector({"s": -2, "d": 2}))
    with pytest.raises(ModelError):
        feas(reduced, T, v2, None)


def test_restrict_for_set_capacities():
    from tempoflow import canonical_reduction

    reduced, T, v2, trace = reduced_e1(DemandVector({"s": -3, "d": 3}))
    canon = canonical_reduction(reduced, T, v2, trace)
    sources = {j for (i, j) in canon.net.edges if i == canon.s_star}
    a = frozenset({"s"})
    restricted = restrict_for_set(canon, a)
    for s in sources:
        cap = restricted.net.edges[(canon.s_star, s)].capacity(0)
        assert cap == (INF if s in a else 0)


def test_capacity_oT_e1_source_side():
    # {s} alone can deliver at most the two departures in the window
    net = build_e1()
    v = DemandVector({"s": -3, "d": 3})
    assert capacity_oT(net, 3, v, frozenset({"s"}), mode="ten-oracle") == 2


def test_capacity_oT_matches_reported_certificate():
    reduced, T, v2, trace = reduced_e1(DemandVector({"s": -3, "d": 3}))
    outcome = feas(reduced, T, v2, trace)
    assert not outcome.feasible
    fast = capacity_oT(reduced, T, v2, outcome.violated, mode="cten", trace=trace)
    assert fast == outcome.o_T == 4


def test_capacity_oT_empty_and_full():
    reduced, T, v2, trace = reduced_e1(DemandVector({"s": -2, "d": 2}))
    terminals = frozenset(reduced.terminals)
    assert capacity_oT(reduced, T, v2, frozenset(), mode="cten", trace=trace) == 0
    assert capacity_oT(reduced, T, v2, terminals, mode="cten", trace=trace) == 0


def test_capacity_modes_agree(corpus):
    for parsed in corpus[:30]:
        net, v = parsed.network, parsed.demands
        one_shot, _ = to_one_shot(net)
        reduced, T, v2, trace = hoppe_tardos_star(one_shot, net.horizon, v)
        a = frozenset(s for s in reduced.sources if v2.get(s) < 0)
        fast = capacity_oT(reduced, T, v2, a, mode="cten", trace=trace)
        slow = capacity_oT(reduced, T, v2, a, mode="ten-oracle")
        assert fast == slow


def test_claim_identity_on_infeasible(corpus):
    """|f| - v(A cap S-) + v((S \\ A) cap S+) equals the restricted max flow."""
    from tempoflow import build_cten, canonical_reduction, cten_breakpoints, max_flow

    checked = 0
    for parsed in corpus:
        net, v = parsed.network, parsed.demands
        outcome = dttn_feasible(net, net.horizon, v)
        if outcome.feasible:
            continue
        canon = outcome.canonical
        a = outcome.violated
        reduced_sinks = {i for (i, j) in canon.net.edges if j == canon.d_star}
        reduced_sources = {j for (i, j) in canon.net.edges if i == canon.s_star}
        v2 = {
            s: -canon.net.edges[(canon.s_star, s)].capacity(0) for s in reduced_sources
        } | {d: canon.net.edges[(d, canon.d_star)].capacity(canon.horizon) for d in reduced_sinks}
        restricted = restrict_for_set(canon, a)
        value, _ = max_flow(build_cten(restricted.net, outcome.breakpoints))
        expected = (
            outcome.flow_value
            - sum(v2[d] for d in a & reduced_sinks)
            + sum(v2[s] for s in (reduced_sources - a))
        )
        assert value == expected
        checked += 1
        if checked >= 25:
            break
    assert checked >= 10
