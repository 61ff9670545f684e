"""Acts, normalized utilities, preferences, expected utility, lottery
realization, the reduction to few-outcome acts, and the uniform metric."""

import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from baru import (
    Act,
    Density,
    INDIFFERENT,
    Lottery,
    OutcomeSpace,
    Preference,
    Profile,
    TOL_MEASURE,
    Utility,
    ZeroFunction,
    compare,
    discount_to_belief,
    expected_utility,
    normalize_utility,
    preference_distance,
    pushforward,
    realize_lottery_act,
    simple_reduction,
)

SPACE = OutcomeSpace(("a", "b", "c", "d"))


def test_outcome_space_needs_four_distinct_labels():
    with pytest.raises(ValueError):
        OutcomeSpace(("a", "b", "c"))
    with pytest.raises(ValueError):
        OutcomeSpace(("a", "b", "c", "c"))
    assert SPACE.index("c") == 2
    assert "c" in SPACE and "z" not in SPACE


def test_act_must_tile_unit_interval():
    with pytest.raises(ValueError):
        Act(((0.0, 0.5, "a"),))
    with pytest.raises(ValueError):
        Act(((0.0, 0.5, "a"), (0.6, 1.0, "b")))
    with pytest.raises(ValueError):
        Act(((0.5, 1.0, "a"), (0.0, 0.5, "b")))  # constructor wants order
    act = Act.from_segments(((0.5, 1.0, "a"), (0.0, 0.5, "b")))  # sorts
    assert act.outcome_at(0.25) == "b"
    assert act.outcome_at(0.75) == "a"


def test_act_merge_joins_adjacent_equal_labels():
    act = Act.from_segments(((0.0, 0.3, "a"), (0.3, 0.7, "a"), (0.7, 1.0, "b")), merge=True)
    assert act.segments == ((0.0, 0.7, "a"), (0.7, 1.0, "b"))
    assert act.outcomes_used() == ("a", "b")


def test_act_dict_round_trip():
    act = Act.from_segments(((0.0, 0.25, "d"), (0.25, 1.0, "a")))
    assert Act.from_dict(act.as_dict()) == act


def test_utility_requires_unit_normalization():
    with pytest.raises(ValueError):
        Utility({"a": 0.2, "b": 0.9})
    u = Utility({"a": 0.0, "b": 1.0, "c": 0.25})
    assert u.value("c") == 0.25
    with pytest.raises(ValueError):
        u.value("missing")


def test_normalize_utility_strips_positive_affine_maps():
    raw = {"a": 3.0, "b": -1.0, "c": 2.6, "d": -1.0}
    u = normalize_utility(raw, SPACE)
    v = normalize_utility({k: 2.5 * x + 7.0 for k, x in raw.items()}, SPACE)
    assert u is not None and v is not None
    for lab in SPACE.labels:
        assert u.value(lab) == pytest.approx(v.value(lab), abs=1e-12)
    assert u.value("a") == 1.0 and u.value("b") == 0.0


def test_normalize_utility_constant_is_indifference():
    assert normalize_utility({lab: 4.2 for lab in SPACE.labels}, SPACE) is None


def test_normalize_utility_rejects_bad_support():
    with pytest.raises(ValueError):
        normalize_utility({"a": 1.0}, SPACE)
    with pytest.raises(ValueError):
        normalize_utility({**{l: 0.0 for l in SPACE.labels}, "zz": 1.0}, SPACE)


def test_preference_pairs_or_nothing():
    with pytest.raises(ValueError):
        Preference(Density.uniform(), None)
    with pytest.raises(ValueError):
        Preference(None, Utility({"a": 0.0, "b": 1.0}))
    assert INDIFFERENT.is_indifferent
    assert not Preference(Density.uniform(), Utility({"a": 0.0, "b": 1.0})).is_indifferent


def test_profile_validation():
    p = Preference(Density.uniform(), Utility({lab: float(lab == "a") for lab in SPACE.labels}))
    with pytest.raises(ValueError):
        Profile(SPACE, (p, p))  # fewer than three agents
    mismatched = Preference(Density.uniform(), Utility({"x": 0.0, "y": 1.0}))
    with pytest.raises(ValueError):
        Profile(SPACE, (p, mismatched, INDIFFERENT))
    prof = Profile(SPACE, (p, INDIFFERENT, p))
    assert prof.concerned == (0, 2)
    swapped = prof.swapped(0, 1)
    assert swapped.concerned == (1, 2)
    replaced = prof.replace(0, INDIFFERENT)
    assert replaced.concerned == (2,)


def test_expected_utility_hand_value(table1):
    profile, f, g = table1
    assert expected_utility(profile.agents[0], f) == pytest.approx(0.9, abs=1e-15)
    assert expected_utility(profile.agents[0], g) == pytest.approx(0.9, abs=1e-15)
    assert expected_utility(profile.agents[1], f) == pytest.approx(0.9, abs=1e-15)
    assert expected_utility(profile.agents[1], g) == pytest.approx(0.8, abs=1e-15)
    assert expected_utility(INDIFFERENT, f) == 0.0


def test_compare_verdicts(table1):
    profile, f, g = table1
    assert compare(profile.agents[0], f, g).verdict == "tie"
    assert compare(profile.agents[1], f, g).verdict == "first"
    assert compare(profile.agents[1], g, f).verdict == "second"


def test_pushforward_masses(table1):
    profile, f, _ = table1
    lot = pushforward(f, profile.agents[0].belief, profile.space)
    assert lot.value("a") == pytest.approx(0.9, abs=1e-12)
    assert lot.value("b") == pytest.approx(0.1, abs=1e-12)
    assert lot.value("c") == 0.0


def test_lottery_validation():
    with pytest.raises(ValueError):
        Lottery({"a": 0.7, "b": 0.7})
    with pytest.raises(ValueError):
        Lottery({"a": -0.1, "b": 1.1})
    with pytest.raises(ValueError):
        Lottery({"zz": 1.0}, SPACE)
    lot = Lottery({"a": 1.0}, SPACE)
    assert lot.value("d") == 0.0


def test_realize_lottery_act_single_belief():
    target = Lottery({"a": 0.25, "b": 0.5, "c": 0.25}, SPACE)
    d = Density.from_state_probs((0.7, 0.3))
    act = realize_lottery_act((d,), target, SPACE)
    got = pushforward(act, d, SPACE)
    for lab in SPACE.labels:
        assert got.value(lab) == pytest.approx(target.value(lab), abs=TOL_MEASURE)


def test_realize_lottery_act_two_beliefs_simultaneously():
    target = Lottery({"a": 0.4, "d": 0.6}, SPACE)
    d1 = Density.from_state_probs((0.9, 0.1))
    d2 = Density.from_state_probs((0.2, 0.8))
    act = realize_lottery_act((d1, d2), target, SPACE)
    for d in (d1, d2):
        got = pushforward(act, d, SPACE)
        for lab in SPACE.labels:
            assert got.value(lab) == pytest.approx(target.value(lab), abs=TOL_MEASURE)


def test_simple_reduction_preserves_all_expectations(table1):
    profile, f, _ = table1
    reduced = simple_reduction(profile, f)
    for i in profile.concerned:
        assert expected_utility(profile.agents[i], reduced) == pytest.approx(
            expected_utility(profile.agents[i], f), abs=1e-9
        )


def test_simple_reduction_bounds_range_per_group(rng):
    # agents 1..2 share the utility vector, so their groups collapse and
    # the focal agent keeps at most two outcomes per group
    space = SPACE
    u_shared = Utility({"a": 0.0, "b": 1.0, "c": 1.0, "d": 0.0})
    u_focal = Utility({"a": 0.0, "b": 0.9, "c": 0.3, "d": 1.0})
    prof = Profile(
        space,
        (
            Preference(Density.uniform(), u_focal),
            Preference(Density.from_state_probs((0.3, 0.7)), u_shared),
            Preference(Density.from_state_probs((0.6, 0.4)), u_shared),
        ),
    )
    act = Act.from_segments(
        ((0.0, 0.2, "a"), (0.2, 0.45, "d"), (0.45, 0.8, "b"), (0.8, 1.0, "c"))
    )
    reduced = simple_reduction(prof, act)
    for i in prof.concerned:
        assert expected_utility(prof.agents[i], reduced) == pytest.approx(
            expected_utility(prof.agents[i], act), abs=1e-9
        )
    # groups under u_shared: {a, d} -> 0 and {b, c} -> 1; two outcomes each
    groups = {0.0: set(), 1.0: set()}
    for lab in reduced.outcomes_used():
        groups[u_shared.value(lab)].add(lab)
    assert all(len(g) <= 2 for g in groups.values())


def test_preference_distance_identical_zero(table1):
    profile, _, _ = table1
    assert preference_distance(profile.agents[0], profile.agents[0]) == 0.0


def test_preference_distance_table1_pair(table1):
    profile, _, _ = table1
    assert preference_distance(profile.agents[0], profile.agents[1]) == pytest.approx(
        1.0, abs=1e-12
    )


def test_preference_distance_indifference_conventions(table1):
    profile, _, _ = table1
    assert preference_distance(INDIFFERENT, INDIFFERENT) == 0.0
    assert preference_distance(profile.agents[0], INDIFFERENT) == 1.0


def test_preference_distance_equal_beliefs_is_sup_utility_gap(rng):
    # with a common belief the bang-bang supremum collapses to a weighted
    # L-infinity utility gap; on a uniform belief it is the plain sup gap
    for _ in range(25):
        vals1 = {lab: rng.random() for lab in SPACE.labels}
        vals2 = {lab: rng.random() for lab in SPACE.labels}
        u1 = normalize_utility(vals1, SPACE)
        u2 = normalize_utility(vals2, SPACE)
        if u1 is None or u2 is None:
            continue
        p = Preference(Density.uniform(), u1)
        q = Preference(Density.uniform(), u2)
        want = max(abs(u1.value(lab) - u2.value(lab)) for lab in SPACE.labels)
        assert preference_distance(p, q) == pytest.approx(want, abs=1e-12)


def test_preference_distance_beats_any_single_act(table1, rng):
    profile, f, g = table1
    p, q = profile.agents[0], profile.agents[1]
    d = preference_distance(p, q)
    for act in (f, g, Act.constant("a"), Act.constant("d")):
        gap = abs(expected_utility(p, act) - expected_utility(q, act))
        assert gap <= d + 1e-12


def test_discount_to_belief():
    d = discount_to_belief((0.0, 0.5, 1.0), (2.0, 1.0))
    assert d.mass(0.0, 0.5) == pytest.approx(2.0 / 3.0, abs=1e-12)
    with pytest.raises(ZeroFunction):
        discount_to_belief((0.0, 1.0), (0.0,))
    with pytest.raises(ValueError):
        discount_to_belief((0.0, 1.0), (-1.0,))


@st.composite
def lotteries(draw):
    weights = [draw(st.floats(min_value=0.0, max_value=1.0)) for _ in SPACE.labels]
    total = math.fsum(weights)
    if total <= 0.0:
        weights = [1.0] * len(weights)
        total = float(len(weights))
    return Lottery({lab: w / total for lab, w in zip(SPACE.labels, weights)}, SPACE)


@given(lotteries(), st.floats(min_value=0.05, max_value=0.95))
@settings(max_examples=120, deadline=None)
def test_realize_lottery_round_trip_property(lot, p):
    d1 = Density.from_state_probs((p, 1.0 - p))
    d2 = Density.uniform()
    act = realize_lottery_act((d1, d2), lot, SPACE)
    for d in (d1, d2):
        got = pushforward(act, d, SPACE)
        for lab in SPACE.labels:
            assert abs(got.value(lab) - lot.value(lab)) <= 1e-9
