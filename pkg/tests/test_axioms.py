"""Single-scenario axiom checkers, co-redundancy certification, spurious
unanimity, the three-horse demonstration, and the continuity probe."""

import pytest

from baru import (
    Act,
    Coarsening,
    Density,
    INDIFFERENT,
    OutcomeSpace,
    Preference,
    Profile,
    Utility,
    baru,
    check_anonymity,
    check_faithfulness,
    check_independence_redundant_acts,
    check_no_belief_imposition,
    check_restricted_monotonicity,
    check_restricted_pareto,
    common_belief_feasible,
    complementary_ignorance_demo,
    continuity_probe,
    default_anchor,
    detect_spurious_unanimity,
    expected_utility,
    rule_by_name,
    swf3,
    swf4,
    swf5,
    swf6,
)
from baru.axioms import CoRedundancyCertificate, Refused, ScenarioRejected, certify_coredundancy
from baru.harness import reversal

SPACE = OutcomeSpace(("a", "b", "c", "d"))


def _last_dictator(profile: Profile):
    """Toy rule for violation tests: only the last concerned agent counts."""
    last = profile.concerned[-1]
    solo = tuple(
        p if j == last else INDIFFERENT for j, p in enumerate(profile.agents)
    )
    return baru(Profile(profile.space, solo))


def _reversed_utilities(profile: Profile):
    """Toy anti-utilitarian rule: aggregates the reversed utilities."""
    flipped = tuple(
        p if p.is_indifferent else Preference(p.belief, reversal(p.utility))
        for p in profile.agents
    )
    return baru(Profile(profile.space, flipped))


# -- faithfulness -----------------------------------------------------------


def test_faithfulness_baru_satisfied():
    assert check_faithfulness(baru, SPACE).satisfied


def test_faithfulness_phantom_rule_violated():
    phantom = default_anchor(SPACE)
    v = check_faithfulness(lambda pr: swf3(pr, phantom), SPACE)
    assert not v.satisfied
    assert v.witness["society_utility"] is not None
    assert v.as_dict()["verdict"] == "violated"


# -- anonymity ---------------------------------------------------------------


def test_anonymity_baru_satisfied(table1):
    profile, _, _ = table1
    v = check_anonymity(baru, profile)
    assert v.satisfied
    assert v.trials == 3  # all transpositions of three agents


def test_anonymity_positional_rule_violated(table1):
    profile, _, _ = table1
    v = check_anonymity(swf6, profile)
    assert not v.satisfied
    assert "swap" in v.witness and v.witness["distance"] > 0.0


# -- no belief imposition ----------------------------------------------------


def test_nbi_baru_satisfied(table1):
    profile, _, _ = table1
    assert check_no_belief_imposition(baru, profile, 0).satisfied
    assert check_no_belief_imposition(baru, profile, 1).satisfied


def test_nbi_dictator_violated(table1):
    profile, _, _ = table1
    v = check_no_belief_imposition(swf4, profile, 0)
    assert not v.satisfied
    assert v.witness["distance_with_agent"] <= 1e-9
    assert v.witness["distance_without_agent"] > 1e-9


def test_nbi_rejects_indifferent_agent(table1):
    profile, _, _ = table1
    with pytest.raises(ScenarioRejected):
        check_no_belief_imposition(baru, profile, 2)


# -- restricted monotonicity --------------------------------------------------


def test_rm_baru_follows_new_agent(table1):
    profile, _, _ = table1
    base = Profile(SPACE, (profile.agents[0], INDIFFERENT, profile.agents[1]))
    society = baru(base)
    f, g = Act.constant("a"), Act.constant("b")
    assert society.compare(f, g).verdict == "tie"
    newpref = Preference(
        society.preference.belief,
        Utility({"a": 1.0, "b": 0.0, "c": 0.5, "d": 0.0}),
    )
    v = check_restricted_monotonicity(baru, base, 1, newpref, f, g)
    assert v.satisfied


def test_rm_last_dictator_ignores_new_agent(table1):
    profile, f, g = table1
    # society is the last agent alone, which ties f and g; the acquired
    # preference strictly ranks them, and society must not shrug it off
    base = Profile(SPACE, (profile.agents[1], INDIFFERENT, profile.agents[0]))
    tie_holder = profile.agents[0]
    assert _last_dictator(base).compare(f, g).verdict == "tie"
    newpref = Preference(tie_holder.belief, profile.agents[1].utility)
    v = check_restricted_monotonicity(_last_dictator, base, 1, newpref, f, g)
    assert not v.satisfied
    assert v.witness["agent_verdict"] == "second"
    assert v.witness["society_verdict"] == "tie"


def test_rm_rejects_concerned_slot(table1):
    profile, f, g = table1
    with pytest.raises(ScenarioRejected):
        check_restricted_monotonicity(baru, profile, 0, profile.agents[0], f, g)


def test_rm_rejects_unbalanced_acts(table1):
    profile, f, g = table1
    base = Profile(SPACE, (profile.agents[0], INDIFFERENT, profile.agents[1]))
    newpref = Preference(Density.from_state_probs((0.2, 0.8)), profile.agents[0].utility)
    # f's pushforward differs between society's belief and the new one
    with pytest.raises(ScenarioRejected):
        check_restricted_monotonicity(baru, base, 1, newpref, f, g)


def test_rm_rejects_society_strictness(table1):
    profile, f, g = table1
    base = Profile(SPACE, (profile.agents[0], INDIFFERENT, profile.agents[1]))
    society = baru(base)
    newpref = Preference(society.preference.belief, profile.agents[0].utility)
    # society strictly prefers g at base, so the scenario is vacuous
    with pytest.raises(ScenarioRejected):
        check_restricted_monotonicity(baru, base, 1, newpref, f, g)


def test_rm_indifferent_society_needs_constant_acts():
    u = Utility({"a": 1.0, "b": 0.0, "c": 0.3, "d": 0.6})
    prof = Profile(SPACE, (INDIFFERENT, INDIFFERENT, INDIFFERENT))
    newpref = Preference(Density.uniform(), u)
    fork = Act.from_segments(((0.0, 0.5, "a"), (0.5, 1.0, "b")))
    with pytest.raises(ScenarioRejected):
        check_restricted_monotonicity(baru, prof, 0, newpref, fork, Act.constant("c"))
    v = check_restricted_monotonicity(
        baru, prof, 0, newpref, Act.constant("a"), Act.constant("b")
    )
    assert v.satisfied and "indifferent-society" in v.notes


# -- independence of redundant acts ------------------------------------------


def test_ira_identical_profiles_trivially_pass(table1):
    profile, _, _ = table1
    v = check_independence_redundant_acts(
        baru, profile, profile, Coarsening.identity(), profile.space.labels
    )
    assert v.satisfied


def test_ira_rejects_unconcerned_mismatch(table1):
    profile, _, _ = table1
    other = Profile(SPACE, (profile.agents[0], INDIFFERENT, profile.agents[1]))
    with pytest.raises(ScenarioRejected):
        check_independence_redundant_acts(
            baru, profile, other, Coarsening.identity(), profile.space.labels
        )


def test_certify_identity_full_outcomes(table1):
    profile, _, _ = table1
    cert = certify_coredundancy(profile, Coarsening.identity(), profile.space.labels)
    assert isinstance(cert, CoRedundancyCertificate)
    assert cert.residual <= 1e-9


def test_certify_refuses_single_outcome(table1):
    profile, _, _ = table1
    out = certify_coredundancy(profile, Coarsening.identity(), ("a",))
    assert isinstance(out, Refused)
    assert out.reason == "image-mismatch"
    assert out.direction is not None and out.residual > 1e-9


def test_certify_interior_outcome_is_redundant():
    # outcome d's utility pair (0.5, 0.35) lies in the hull of the other
    # three with shared coefficients, so dropping it never shrinks the image
    u1 = Utility({"a": 0.0, "b": 1.0, "c": 0.5, "d": 0.5})
    u2 = Utility({"a": 0.0, "b": 0.3, "c": 1.0, "d": 0.35})
    prof = Profile(
        SPACE,
        (
            Preference(Density.from_state_probs((0.7, 0.3)), u1),
            Preference(Density.from_state_probs((0.4, 0.6)), u2),
            INDIFFERENT,
        ),
    )
    cert = certify_coredundancy(prof, Coarsening.identity(), ("a", "b", "c"))
    assert isinstance(cert, CoRedundancyCertificate)
    assert cert.residual <= 1e-9


# -- restricted Pareto ---------------------------------------------------------


def test_pareto_baru_follows_unanimity(table1):
    profile, _, _ = table1
    v = check_restricted_pareto(baru, profile, Act.constant("a"), Act.constant("d"))
    assert v.satisfied


def test_pareto_reversing_rule_violates(table1):
    profile, _, _ = table1
    v = check_restricted_pareto(
        _reversed_utilities, profile, Act.constant("a"), Act.constant("d")
    )
    assert not v.satisfied
    assert v.witness["expected"] == "first"
    assert v.witness["society_verdict"] == "second"


def test_pareto_rejects_mismatched_pushforwards(table1):
    profile, f, g = table1
    with pytest.raises(ScenarioRejected):
        check_restricted_pareto(baru, profile, f, g)


def test_pareto_rejects_disagreement(table1):
    profile, _, _ = table1
    with pytest.raises(ScenarioRejected):
        check_restricted_pareto(baru, profile, Act.constant("a"), Act.constant("b"))


# -- spurious unanimity ----------------------------------------------------------


def test_table1_unanimity_is_spurious(table1):
    profile, f, g = table1
    rep = detect_spurious_unanimity(profile, f, g)
    assert rep.favored == "f"
    assert rep.strict_agents == (1,)
    assert rep.spurious and rep.common_belief is None


def test_common_belief_exists_for_g(table1):
    profile, f, g = table1
    masses = common_belief_feasible(profile, f, g, favor="g")
    assert masses is not None
    for i in profile.concerned:
        u = profile.agents[i].utility
        adv = sum(
            m * (u.value(g.outcome_at(a)) - u.value(f.outcome_at(a)))
            for a, _, m in masses
        )
        assert adv >= -1e-9


def test_shared_belief_unanimity_not_spurious():
    u1 = Utility({"a": 0.0, "b": 1.0, "c": 0.6, "d": 0.1})
    u2 = Utility({"a": 0.0, "b": 1.0, "c": 0.2, "d": 0.9})
    shared = Density.from_state_probs((0.5, 0.5))
    prof = Profile(
        SPACE,
        (Preference(shared, u1), Preference(shared, u2), INDIFFERENT),
    )
    rep = detect_spurious_unanimity(prof, Act.constant("b"), Act.constant("a"))
    assert rep.favored == "f"
    assert not rep.spurious
    assert rep.common_belief is not None


# -- complementary ignorance -----------------------------------------------------


def test_horse_race_report_values():
    rep = complementary_ignorance_demo()
    for evs in rep.agent_evs:
        assert evs == pytest.approx((0.5, 0.5), abs=1e-12)
    assert rep.baru_verdict == "tie"
    assert rep.pooled_horse_probs == pytest.approx((0.0, 0.0, 1.0), abs=1e-12)
    assert rep.pooled_verdict == "second"
    assert rep.pushforwards_match


# -- continuity --------------------------------------------------------------------


def test_continuity_baru_smooth(table1):
    profile, _, _ = table1
    rep = continuity_probe(baru, profile)
    assert not rep.flagged
    # output distances decay along with the input perturbations
    assert rep.rows[-1][2] < rep.rows[0][2]


def test_continuity_multiplicity_rule_jumps(table1):
    profile, _, _ = table1
    p1, p2 = profile.agents[0], profile.agents[1]
    twins = Profile(SPACE, (p1, p1, p2))
    rep = continuity_probe(swf5, twins, agent=0)
    assert rep.flagged
    assert rep.flag_pair is not None


def test_continuity_requires_two_concerned(table1):
    profile, _, _ = table1
    solo = Profile(SPACE, (profile.agents[0], INDIFFERENT, INDIFFERENT))
    with pytest.raises(ScenarioRejected):
        continuity_probe(baru, solo)
