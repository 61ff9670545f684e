"""Executable axiom checks with concrete witnesses.

Each checker examines one fully specified scenario and returns an
AxiomVerdict.  Scenarios whose preconditions fail raise ScenarioRejected
instead of returning a verdict: a vacuously true scenario must not be
counted as evidence that an axiom holds.  Randomized batteries over these
checkers live in `harness`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import fsum
from typing import Callable, Sequence

import numpy as np

from . import lp
from .geometry import direction_set, geometry_for, image_polytope, support_values
from .measure import (
    Coarsening,
    Density,
    EventSet,
    TOL_EXACT,
    TOL_MEASURE,
    belief_distance,
    merged_breakpoints,
    pushforward_coarsening,
)
from .prefs import (
    Act,
    INDIFFERENT,
    Lottery,
    OutcomeSpace,
    Preference,
    Profile,
    Utility,
    compare,
    expected_utility,
    preference_distance,
    pushforward,
)
from .swf import SwfResult, baru, geometric_pool

__all__ = [
    "AxiomVerdict",
    "ScenarioRejected",
    "CoRedundancyCertificate",
    "Refused",
    "image_polytope",
    "certify_coredundancy",
    "check_faithfulness",
    "check_anonymity",
    "check_no_belief_imposition",
    "check_restricted_monotonicity",
    "check_independence_redundant_acts",
    "check_restricted_pareto",
    "detect_spurious_unanimity",
    "common_belief_feasible",
    "complementary_ignorance_demo",
    "continuity_probe",
]

Swf = Callable[[Profile], SwfResult]


class ScenarioRejected(Exception):
    """The scenario does not meet the axiom's preconditions; it carries no
    information either way."""


@dataclass(frozen=True)
class AxiomVerdict:
    axiom: str
    satisfied: bool
    trials: int
    witness: dict | None = None
    notes: str = ""

    def as_dict(self) -> dict:
        return {
            "axiom": self.axiom,
            "verdict": "satisfied-on-sample" if self.satisfied else "violated",
            "trials": self.trials,
            "witness": self.witness,
            "notes": self.notes,
        }


def _lottery_gap(p: Lottery, q: Lottery) -> float:
    labs = sorted(set(p.labels) | set(q.labels))
    pm, qm = p.as_mapping(), q.as_mapping()
    return max(abs(pm.get(l, 0.0) - qm.get(l, 0.0)) for l in labs)


# ---------------------------------------------------------------------------
# co-redundancy certification


@dataclass(frozen=True)
class CoRedundancyCertificate:
    """Witness that acts factoring through the coarsening and using only
    the listed outcomes already span the full utility image."""

    coarsening: Coarsening
    outcomes: tuple[str, ...]
    pushforwards: tuple[tuple[int, Density], ...]
    residual: float


@dataclass(frozen=True)
class Refused:
    """Certification failure: reason is "image-mismatch" (with a
    separating direction) or "improper-pushforward"."""

    reason: str
    detail: str
    direction: tuple[float, ...] | None = None
    residual: float | None = None


def certify_coredundancy(
    profile: Profile, q: Coarsening, outcomes: Sequence[str]
) -> CoRedundancyCertificate | Refused:
    outs = tuple(outcomes)
    if not outs:
        raise ValueError("outcome subset must be non-empty")
    for lab in outs:
        if lab not in profile.space:
            raise ValueError(f"unknown outcome {lab!r}")
    ids = profile.concerned
    if not ids:
        raise ValueError("certification needs a concerned agent")
    push = []
    for i in ids:
        try:
            push.append((i, pushforward_coarsening(q, profile.agents[i].belief)))
        except (ValueError, ZeroDivisionError) as exc:
            return Refused("improper-pushforward", f"agent {i}: {exc}")
    dirs = direction_set(len(ids))
    full = support_values(geometry_for(profile), dirs)
    restricted = support_values(geometry_for(profile, q, outs), dirs)
    gaps = np.abs(full - restricted)
    residual = float(gaps.max())
    if residual > TOL_MEASURE:
        k = int(gaps.argmax())
        return Refused(
            "image-mismatch",
            f"support gap {residual:.3e} at direction index {k}",
            tuple(float(v) for v in dirs[k]),
            residual,
        )
    return CoRedundancyCertificate(q, outs, tuple(push), residual)


# ---------------------------------------------------------------------------
# the six axioms


def check_faithfulness(swf: Swf, space: OutcomeSpace, n_agents: int = 3) -> AxiomVerdict:
    """Society must be completely indifferent when every agent is."""
    profile = Profile(space, (INDIFFERENT,) * n_agents)
    result = swf(profile)
    ok = result.preference.is_indifferent
    witness = None
    if not ok:
        witness = {
            "n_agents": n_agents,
            "society_utility": None if result.raw_utility is None else list(result.raw_utility),
        }
    return AxiomVerdict("faithfulness", ok, 1, witness)


def check_anonymity(swf: Swf, profile: Profile) -> AxiomVerdict:
    """Output must be unchanged under agent transpositions (which generate
    the full permutation group)."""
    base = swf(profile).preference
    n = len(profile.agents)
    trials = 0
    for i in range(n):
        for j in range(i + 1, n):
            trials += 1
            swapped = swf(profile.swapped(i, j)).preference
            dist = preference_distance(base, swapped)
            if dist > TOL_MEASURE:
                return AxiomVerdict(
                    "anonymity",
                    False,
                    trials,
                    {"swap": [i, j], "distance": dist},
                )
    return AxiomVerdict("anonymity", True, trials)


def check_no_belief_imposition(swf: Swf, profile: Profile, agent: int) -> AxiomVerdict:
    """If society's belief without agent i differs from agent i's, adding
    the agent must not make society's belief exactly the agent's."""
    own = profile.agents[agent]
    if own.is_indifferent:
        raise ScenarioRejected("agent is completely indifferent")
    full = swf(profile)
    reduced = swf(profile.replace(agent, INDIFFERENT))
    if full.preference.is_indifferent or reduced.preference.is_indifferent:
        raise ScenarioRejected("society must be represented with and without the agent")
    d_without = belief_distance(reduced.preference.belief, own.belief)
    d_with = belief_distance(full.preference.belief, own.belief)
    violated = d_without > TOL_MEASURE and d_with <= TOL_MEASURE
    witness = None
    if violated:
        witness = {
            "agent": agent,
            "distance_without_agent": d_without,
            "distance_with_agent": d_with,
        }
    return AxiomVerdict("no-belief-imposition", not violated, 1, witness)


def _is_constant_act(act: Act) -> bool:
    return len(act.outcomes_used()) == 1


def check_restricted_monotonicity(
    swf: Swf,
    base: Profile,
    agent: int,
    newpref: Preference,
    f: Act,
    g: Act,
) -> AxiomVerdict:
    """An indifferent agent acquires a preference whose belief agrees with
    society's on the acts in question; society must then follow the
    agent's weak/strict ranking of f against g."""
    if not base.agents[agent].is_indifferent:
        raise ScenarioRejected("agent must be indifferent at the base profile")
    if newpref.is_indifferent:
        raise ScenarioRejected("the acquired preference must be represented")
    before = swf(base)
    if before.preference.is_indifferent:
        # Complete indifference is represented by every belief, so the
        # pushforward precondition can only hold universally: constant acts.
        if not (_is_constant_act(f) and _is_constant_act(g)):
            raise ScenarioRejected("indifferent-society branch needs constant acts")
        notes = "indifferent-society branch (constant acts)"
    else:
        soc_belief = before.preference.belief
        for act in (f, g):
            gap = _lottery_gap(
                pushforward(act, soc_belief, base.space),
                pushforward(act, newpref.belief, base.space),
            )
            if gap > TOL_MEASURE:
                raise ScenarioRejected(f"pushforward mismatch {gap:.3e}")
        if before.compare(f, g).verdict != "tie":
            raise ScenarioRejected("society is not indifferent between f and g at base")
        notes = ""
    agent_verdict = compare(newpref, f, g).verdict
    after_verdict = swf(base.replace(agent, newpref)).compare(f, g).verdict
    violated = after_verdict != agent_verdict
    witness = None
    if violated:
        witness = {
            "agent": agent,
            "agent_verdict": agent_verdict,
            "society_verdict": after_verdict,
        }
    return AxiomVerdict("restricted-monotonicity", not violated, 1, witness, notes)


def _restricted_view(
    result: SwfResult, q: Coarsening, outcomes: tuple[str, ...]
) -> tuple[Density, dict[str, float]] | None:
    """Society's preference seen only through acts that factor through q
    into the outcome subset; None when that restriction is indifference."""
    if result.preference.is_indifferent:
        return None
    raw = dict(result.raw_utility)
    vals = [raw[o] for o in outcomes]
    lo, hi = min(vals), max(vals)
    if hi - lo <= TOL_EXACT:
        return None
    norm = {o: (raw[o] - lo) / (hi - lo) for o in outcomes}
    return pushforward_coarsening(q, result.preference.belief), norm


def check_independence_redundant_acts(
    swf: Swf,
    p: Profile,
    p2: Profile,
    q: Coarsening,
    outcomes: Sequence[str],
) -> AxiomVerdict:
    """Two profiles that agree on the co-redundant restriction (same
    coarsened beliefs, same utilities on the outcome subset) must yield
    societies that agree on that restriction as well."""
    outs = tuple(outcomes)
    for prof, tag in ((p, "p"), (p2, "p'")):
        cert = certify_coredundancy(prof, q, outs)
        if isinstance(cert, Refused):
            raise ScenarioRejected(f"{tag}: co-redundancy refused ({cert.reason}: {cert.detail})")
    if p.concerned != p2.concerned:
        raise ScenarioRejected("profiles differ in which agents are concerned")
    for i in p.concerned:
        a, b = p.agents[i], p2.agents[i]
        push_gap = belief_distance(
            pushforward_coarsening(q, a.belief), pushforward_coarsening(q, b.belief)
        )
        if push_gap > TOL_MEASURE:
            raise ScenarioRejected(f"agent {i} coarsened beliefs differ by {push_gap:.3e}")
        u_gap = max(abs(a.utility.value(o) - b.utility.value(o)) for o in outs)
        if u_gap > TOL_EXACT:
            raise ScenarioRejected(f"agent {i} utilities differ on the subset by {u_gap:.3e}")
    r1 = _restricted_view(swf(p), q, outs)
    r2 = _restricted_view(swf(p2), q, outs)
    if (r1 is None) != (r2 is None):
        witness = {"restriction_indifferent": ["p" if r1 is None else "p'"]}
        return AxiomVerdict("independence-redundant-acts", False, 1, witness)
    if r1 is None:
        return AxiomVerdict("independence-redundant-acts", True, 1)
    belief_gap = belief_distance(r1[0], r2[0])
    util_gap = max(abs(r1[1][o] - r2[1][o]) for o in outs)
    violated = belief_gap > TOL_MEASURE or util_gap > TOL_EXACT
    witness = None
    if violated:
        witness = {"belief_gap": belief_gap, "utility_gap": util_gap}
    return AxiomVerdict("independence-redundant-acts", not violated, 1, witness)


def check_restricted_pareto(swf: Swf, profile: Profile, f: Act, g: Act) -> AxiomVerdict:
    """Unanimity is binding only when both acts induce the same outcome
    distribution under every concerned agent's belief."""
    ids = profile.concerned
    if not ids:
        raise ScenarioRejected("no concerned agents")
    for act in (f, g):
        lotteries = [pushforward(act, profile.agents[i].belief, profile.space) for i in ids]
        for other in lotteries[1:]:
            if _lottery_gap(lotteries[0], other) > TOL_MEASURE:
                raise ScenarioRejected("act pushforwards differ across agents")
    verdicts = [compare(profile.agents[i], f, g).verdict for i in ids]
    n_first = verdicts.count("first")
    n_second = verdicts.count("second")
    if n_first and n_second:
        raise ScenarioRejected("no unanimous direction")
    society = swf(profile).compare(f, g).verdict
    expected = "first" if n_first else ("second" if n_second else "tie")
    violated = society != expected
    witness = None
    if violated:
        witness = {
            "agent_verdicts": verdicts,
            "society_verdict": society,
            "expected": expected,
        }
    return AxiomVerdict("restricted-pareto", not violated, 1, witness)


# ---------------------------------------------------------------------------
# spurious unanimity


def common_belief_feasible(
    profile: Profile,
    f: Act,
    g: Act,
    favor: str = "f",
    pinned: Sequence[tuple[EventSet, float]] = (),
) -> list[tuple[float, float, float]] | None:
    """Searches for one belief under which every concerned agent weakly
    prefers the favored act.  Returns per-segment masses of such a belief,
    or None when no belief exists.

    The candidate belief only matters through the masses it gives the
    cells on which both acts are constant, so an LP over those cell
    masses decides the full (infinite-dimensional) question.
    """
    if favor not in ("f", "g"):
        raise ValueError("favor must be 'f' or 'g'")
    hi, lo = (f, g) if favor == "f" else (g, f)
    extra = list(hi.breakpoints()) + list(lo.breakpoints())
    for ev, _ in pinned:
        for a, b in ev.intervals:
            extra.extend((a, b))
    bps = tuple(sorted(set([0.0, 1.0] + [float(x) for x in extra])))
    segs = list(zip(bps[:-1], bps[1:]))
    S = len(segs)
    ids = profile.concerned
    n_rows = 1 + len(ids) + len(pinned)
    A = np.zeros((n_rows, S + len(ids)))
    b = np.zeros(n_rows)
    A[0, :S] = 1.0
    b[0] = 1.0
    for r, i in enumerate(ids):
        u = profile.agents[i].utility
        for s, (a0, _) in enumerate(segs):
            mid = a0 + 0.5 * (segs[s][1] - a0)
            A[1 + r, s] = u.value(hi.outcome_at(mid)) - u.value(lo.outcome_at(mid))
        A[1 + r, S + r] = -1.0  # slack: advantage of the favored act >= 0
    for k, (ev, target) in enumerate(pinned):
        row = 1 + len(ids) + k
        for s, (a0, b0) in enumerate(segs):
            mid = 0.5 * (a0 + b0)
            if ev.contains_point(mid):
                A[row, s] = 1.0
        b[row] = float(target)
    x = lp.feasible_point(A, b)
    if x is None:
        return None
    return [(a0, b0, float(x[s])) for s, (a0, b0) in enumerate(segs)]


@dataclass(frozen=True)
class SpuriousUnanimityReport:
    favored: str | None
    strict_agents: tuple[int, ...]
    agent_diffs: tuple[tuple[int, float], ...]
    common_belief: tuple[tuple[float, float, float], ...] | None
    spurious: bool

    def as_dict(self) -> dict:
        return {
            "favored": self.favored,
            "strict_agents": list(self.strict_agents),
            "agent_diffs": [[i, d] for i, d in self.agent_diffs],
            "common_belief": None
            if self.common_belief is None
            else [list(row) for row in self.common_belief],
            "spurious": self.spurious,
        }


def detect_spurious_unanimity(profile: Profile, f: Act, g: Act) -> SpuriousUnanimityReport:
    """Unanimity plus the non-existence of any single belief rationalizing
    it marks the agreement as spurious."""
    ids = profile.concerned
    diffs = [(i, compare(profile.agents[i], f, g).diff) for i in ids]
    weak_f = all(d >= -TOL_EXACT for _, d in diffs)
    weak_g = all(d <= TOL_EXACT for _, d in diffs)
    if weak_f:
        favored = "f"
        strict = tuple(i for i, d in diffs if d > TOL_EXACT)
    elif weak_g:
        favored = "g"
        strict = tuple(i for i, d in diffs if d < -TOL_EXACT)
    else:
        return SpuriousUnanimityReport(None, (), tuple(diffs), None, False)
    belief = common_belief_feasible(profile, f, g, favor=favored)
    return SpuriousUnanimityReport(
        favored,
        strict,
        tuple(diffs),
        None if belief is None else tuple(belief),
        belief is None,
    )


# ---------------------------------------------------------------------------
# complementary ignorance (three-horse race)


@dataclass(frozen=True)
class ComplementaryIgnoranceReport:
    profile: Profile = field(compare=False)
    bet1: Act
    bet2: Act
    agent_evs: tuple[tuple[float, float], ...]
    baru_verdict: str
    pooled: Density = field(compare=False)
    pooled_horse_probs: tuple[float, float, float]
    pooled_verdict: str
    pushforwards_match: bool


def complementary_ignorance_demo() -> ComplementaryIgnoranceReport:
    """Two agents each know a different horse will lose; averaging their
    posteriors keeps both bets even, while the geometric pool concludes
    horse 3 wins for sure and backs the second bet."""
    space = OutcomeSpace(("win", "lose", "refund", "double"))
    # Horses occupy [0, 0.25), [0.25, 0.5), [0.5, 1).
    belief1 = Density((0.0, 0.25, 0.5, 1.0), (0.0, 2.0, 1.0))  # knows horse 1 lost
    belief2 = Density((0.0, 0.25, 0.5, 1.0), (2.0, 0.0, 1.0))  # knows horse 2 lost
    utility = Utility({"win": 1.0, "lose": 0.0, "refund": 0.4, "double": 0.7})
    profile = Profile(
        space,
        (Preference(belief1, utility), Preference(belief2, utility), INDIFFERENT),
    )
    bet1 = Act.from_segments([(0.0, 0.5, "win"), (0.5, 1.0, "lose")])  # horses 1 or 2
    bet2 = Act.from_segments([(0.0, 0.5, "lose"), (0.5, 1.0, "win")])  # horse 3
    evs = tuple(
        (
            expected_utility(profile.agents[i], bet1),
            expected_utility(profile.agents[i], bet2),
        )
        for i in profile.concerned
    )
    verdict = baru(profile).compare(bet1, bet2).verdict
    pooled = geometric_pool([belief1, belief2])
    probs = (pooled.mass(0.0, 0.25), pooled.mass(0.25, 0.5), pooled.mass(0.5, 1.0))
    pooled_pref = Preference(pooled, utility)
    pooled_verdict = compare(pooled_pref, bet1, bet2).verdict
    match = all(
        _lottery_gap(
            pushforward(act, belief1, space), pushforward(act, belief2, space)
        )
        <= TOL_MEASURE
        for act in (bet1, bet2)
    )
    return ComplementaryIgnoranceReport(
        profile, bet1, bet2, evs, verdict, pooled, probs, pooled_verdict, match
    )


# ---------------------------------------------------------------------------
# continuity


@dataclass(frozen=True)
class ContinuityReport:
    agent: int
    rows: tuple[tuple[float, float, float], ...]  # (step, input size, output distance)
    flagged: bool
    flag_pair: tuple[float, float] | None

    def as_dict(self) -> dict:
        return {
            "agent": self.agent,
            "rows": [list(r) for r in self.rows],
            "flagged": self.flagged,
            "flag_pair": None if self.flag_pair is None else list(self.flag_pair),
        }


def _median_cut(d: Density) -> float:
    lo, hi = 0.0, 1.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if d.cdf(mid) < 0.5:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _tilted(d: Density) -> Density:
    """A fixed nearby density: half the mass pushed toward the left of the
    median cut (scale 1.5 left, 0.5 right)."""
    cut = _median_cut(d)
    bps = merged_breakpoints([d], extra=[cut])
    vals = []
    for a, b in zip(bps[:-1], bps[1:]):
        scale = 1.5 if b <= cut + 1e-15 else 0.5
        vals.append(d.value_at(a) * scale)
    total = fsum(v * (b - a) for v, (a, b) in zip(vals, zip(bps[:-1], bps[1:])))
    return Density(bps, tuple(v / total for v in vals))


def continuity_probe(
    swf: Swf,
    profile: Profile,
    agent: int | None = None,
    steps: Sequence[float] = (1e-1, 1e-2, 1e-3, 1e-4),
) -> ContinuityReport:
    """Perturbs one agent's belief and utility by decreasing sup-norm
    amounts and watches whether the output preference distance shrinks
    along with the input; a two-decade ratio failure flags the rule."""
    ids = profile.concerned
    if len(ids) < 2:
        raise ScenarioRejected("continuity probe needs at least two concerned agents")
    target = ids[0] if agent is None else agent
    pref = profile.agents[target]
    if pref.is_indifferent:
        raise ScenarioRejected("perturbation target must be concerned")
    d, u = pref.belief, pref.utility
    rho = _tilted(d)
    bps = merged_breakpoints([d, rho])
    sup_b = max(abs(d.value_at(a) - rho.value_at(a)) for a in bps[:-1])
    v = {lab: u.value(lab) ** 2 for lab in u.labels}
    sup_u = max(abs(v[lab] - u.value(lab)) for lab in u.labels)
    scale = max(sup_b, sup_u)
    base = swf(profile).preference
    rows = []
    for step in steps:
        t = 0.0 if scale <= 0.0 else min(1.0, step / scale)
        mixed_vals = tuple(
            (1.0 - t) * d.value_at(a) + t * rho.value_at(a) for a in bps[:-1]
        )
        mixed_belief = Density(bps, mixed_vals)
        mixed_utility = Utility(
            {lab: (1.0 - t) * u.value(lab) + t * v[lab] for lab in u.labels}
        )
        moved = swf(profile.replace(target, Preference(mixed_belief, mixed_utility)))
        rows.append((float(step), t * scale, preference_distance(base, moved.preference)))
    flagged = False
    flag_pair = None
    for i in range(len(rows) - 2):
        big, small = rows[i], rows[i + 2]
        if small[2] > max(big[2] / 10.0, 100.0 * TOL_MEASURE):
            flagged = True
            flag_pair = (big[0], small[0])
            break
    return ContinuityReport(target, tuple(rows), flagged, flag_pair)
