import itertools
import math

import pytest
from hypothesis import given, strategies as st

from endorsenet import (
    EndorserView,
    EvaluationState,
    MissingValue,
    Network,
    Rationale,
    Undefined,
    compute_belief,
    compute_certainty,
    effective_support,
    endorsement_strength,
    evaluate_node,
    relative_certainty,
    relative_importance,
)
from endorsenet.evaluation import combine
from endorsenet.model import MetaEndorsement, SupportEdge


def views(*triples):
    return [EndorserView(f"E{i}", b, c, s) for i, (b, c, s) in enumerate(triples)]


belief = st.floats(-1.0, 1.0)
certainty = st.floats(0.0, 1.0)
support = st.floats(-1.0, 1.0).filter(lambda s: s != 0.0)
endorser = st.tuples(belief, certainty, support)


def test_endorsement_strength_examples():
    assert endorsement_strength(1.0, -0.3) == -0.3
    assert endorsement_strength(0.3, -0.8) == pytest.approx(-0.24)
    assert endorsement_strength(-0.5, -0.6) == pytest.approx(0.30)


def test_endorsement_strength_sign_cases():
    for b, s in itertools.product((-0.5, 0.0, 0.5), repeat=2):
        e = endorsement_strength(b, s)
        assert math.copysign(1, e) * (e != 0) == math.copysign(1, b * s) * (b * s != 0)


def test_relative_certainty_examples():
    assert relative_certainty([0.8, 0.4, 0.0]) == [1.0, 0.5, 0.0]
    assert relative_certainty([0.3]) == [1.0]
    assert relative_certainty([0.0, 0.0]) == [0.0, 0.0]


def test_relative_importance_examples():
    r = relative_importance(views((0.1, 0.5, 0.5), (0.1, 0.5, -0.25), (0.1, 0.5, 0.25)))
    assert r == {"E0": 0.5, "E1": -0.25, "E2": 0.25}
    assert relative_importance(views((0.1, 0.5, -0.7))) == {"E0": -1.0}
    assert relative_importance(views((0.1, 0.5, 0.5), (0.1, 0.0, 0.5))) == {"E0": 1.0}


def test_two_endorser_example():
    vs = views((0.8, 0.9, 0.5), (-0.4, 0.45, 0.5))
    b = compute_belief(vs)
    assert b == pytest.approx(0.3, abs=1e-12)
    assert compute_certainty(b, vs) == pytest.approx(0.575, abs=1e-12)


def test_symmetric_pro_con():
    vs = views((0.8, 1.0, 1.0), (0.8, 1.0, -1.0))
    b = compute_belief(vs)
    assert b == 0.0
    assert compute_certainty(b, vs) == pytest.approx(0.2, abs=1e-12)


def test_single_unit_endorser():
    vs = views((1.0, 1.0, 1.0))
    assert compute_belief(vs) == 1.0
    assert compute_certainty(1.0, vs) == 1.0


def test_zero_certainty_endorser_is_dropped():
    one = views((0.6, 0.7, 0.5))
    two = one + [EndorserView("Z", -1.0, 0.0, 0.5)]
    assert combine([(v.belief, v.certainty, v.support) for v in one]) == combine(
        [(v.belief, v.certainty, v.support) for v in two]
    )


def test_fallback_and_undefined():
    vs = views((0.5, 0.0, 0.5), (0.4, 0.0, -0.2))
    assert compute_belief(vs, Rationale(0.1, 0.2)) == 0.1
    assert compute_certainty(0.0, vs, Rationale(0.1, 0.2)) == 0.2
    with pytest.raises(Undefined):
        compute_belief(vs)


def test_effective_support_examples():
    state = EvaluationState(rationale={"M": Rationale(-1.0, 0.8)})
    assert effective_support(SupportEdge("A", "B", 0.7), state) == 0.7
    edge = SupportEdge("A", "B", 0.7, (MetaEndorsement("M", 0.7),))
    assert effective_support(edge, state) == 0.0
    state.rationale["M"] = Rationale(1.0, 1.0)
    assert effective_support(SupportEdge("A", "B", 0.9, (MetaEndorsement("M", 0.5),)), state) == 1.0


def test_effective_support_missing_value():
    edge = SupportEdge("A", "B", 0.7, (MetaEndorsement("M", 0.7),))
    with pytest.raises(MissingValue):
        effective_support(edge, EvaluationState())


def test_effective_support_ignores_uncertain_metas():
    state = EvaluationState(rationale={"M": Rationale(-1.0, 0.0)})
    edge = SupportEdge("A", "B", 0.4, (MetaEndorsement("M", 0.9),))
    assert effective_support(edge, state) == 0.4


def test_evaluate_node_intuition_only():
    net = Network().add_node("A", (0.6, 1.0))
    state = EvaluationState()
    assert evaluate_node("A", net, state) == Rationale(0.6, 1.0)
    assert state.rationale["A"] == Rationale(0.6, 1.0)


def test_evaluate_node_figure2(fixture_net):
    net = fixture_net("figure2")
    state = EvaluationState()
    for n in ("ESSAYS", "MATH"):
        evaluate_node(n, net, state)
    r = evaluate_node("CS", net, state)
    assert endorsement_strength(0.3, state.effective_support[("ESSAYS", "CS")]) < 0
    assert r.belief < 0.5 * 0.5 / 1.3 + 1e-12


@given(st.lists(endorser, min_size=1, max_size=8))
def test_bounds(triples):
    vs = views(*triples)
    b = compute_belief(vs, Rationale(0.0, 0.0))
    c = compute_certainty(b, vs, Rationale(0.0, 0.0))
    assert -1.0 <= b <= 1.0 and 0.0 <= c <= 1.0


@given(st.lists(endorser, min_size=1, max_size=8), belief, support)
def test_ignorance(triples, b, s):
    fb = Rationale(0.1, 0.3)
    base = combine(triples, fb)
    assert combine(triples + [(b, 0.0, s)], fb) == base


@given(belief, st.floats(0.01, 1.0), st.lists(st.floats(0.01, 1.0), min_size=1, max_size=6))
def test_range_heuristic(v, c, supports):
    vs = views(*[(v, c, s) for s in supports])
    b = compute_belief(vs)
    assert b == pytest.approx(v, abs=1e-12)
    assert compute_certainty(b, vs) == pytest.approx(1.0, abs=1e-12)


@given(st.lists(belief, min_size=2, max_size=6), st.floats(0.1, 1.0), st.floats(0.1, 1.0))
def test_resolution_heuristic(beliefs, c, s):
    mean = sum(beliefs) / len(beliefs)
    last = -1.0
    for t in (1.0, 0.75, 0.5, 0.25, 0.0):
        vs = views(*[(mean + t * (b - mean), c, s) for b in beliefs])
        bj = compute_belief(vs)
        assert bj == pytest.approx(mean, abs=1e-12)
        cj = compute_certainty(bj, vs)
        assert cj >= last - 1e-12
        last = cj


# scaling must not underflow a certainty to zero, so stay clear of subnormals
normal_certainty = st.one_of(st.just(0.0), st.floats(1e-6, 1.0))


@given(st.lists(st.tuples(belief, normal_certainty, support), min_size=1, max_size=6), st.floats(0.05, 1.0))
def test_certainty_scale_invariance(triples, k):
    fb = Rationale(0.0, 0.0)
    a, _ = combine(triples, fb)
    b, _ = combine([(x, c * k, s) for x, c, s in triples], fb)
    assert b.belief == pytest.approx(a.belief, abs=1e-12)
    assert b.certainty == pytest.approx(a.certainty, abs=1e-12)


@given(st.lists(st.tuples(belief, st.floats(0.01, 1.0), support), min_size=1, max_size=6))
def test_mixed_sign_agreement_gives_full_certainty(triples):
    # endorsers whose direction-adjusted beliefs agree are in full agreement
    v = triples[0][0]
    c = triples[0][1]
    aligned = [(v if s > 0 else -v, c, s) for _, _, s in triples]
    r, _ = combine(aligned)
    assert r.certainty == pytest.approx(1.0, abs=1e-12)
