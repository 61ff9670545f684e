"""Society preference rules.

`baru` is the headline rule: average the concerned agents' beliefs, add
their normalized utilities.  The numbered alternatives (`swf1` .. `swf6`)
are deliberately flawed contrasts; each one trades away a different axiom
and the checkers in `axioms` are expected to catch exactly that trade.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import fsum
from typing import Callable, Sequence

import numpy as np

from .geometry import geometry_for, minkowski_polygon
from .measure import (
    Density,
    TOL_EXACT,
    TOL_MEASURE,
    belief_distance,
    merged_breakpoints,
)
from .prefs import (
    Act,
    Comparison,
    INDIFFERENT,
    Preference,
    Profile,
    Utility,
    expected_utility,
    normalize_utility,
    preference_distance,
)

PHANTOM_ID = -1


class DegenerateNashPoint(Exception):
    """The bargaining solve found no usable maximiser (flat or zero
    product).  Not reachable from valid profiles; kept as a guard."""


class NullPool(Exception):
    """Geometric opinion pooling hit mutually singular beliefs: the pooled
    density integrates to zero and cannot be renormalized."""


@dataclass(frozen=True)
class SwfResult:
    """Society preference plus the diagnostics that produced it.

    `belief` and `raw_utility` are kept even when the society is
    indifferent (constant summed utility), so callers can still inspect
    the averaged belief.  Weights are (agent_id, weight) pairs; a phantom
    contributor appears under PHANTOM_ID.
    """

    preference: Preference
    belief: Density | None
    raw_utility: tuple[tuple[str, float], ...] | None
    belief_weights: tuple[tuple[int, float], ...]
    utility_weights: tuple[tuple[int, float], ...]
    concerned: tuple[int, ...]

    def ev(self, act: Act) -> float:
        """Society expectation of the act under the raw (unnormalized)
        summed utility.  Zero when nobody is concerned."""
        if self.belief is None or self.raw_utility is None:
            return 0.0
        raw = dict(self.raw_utility)
        return fsum(self.belief.mass(a, b) * raw[lab] for a, b, lab in act.segments)

    def compare(self, f: Act, g: Act) -> Comparison:
        return Comparison(self.ev(f) - self.ev(g))


def _merge(
    profile: Profile,
    contribs: Sequence[tuple[int, Preference, float, float]],
) -> SwfResult:
    """Combine represented preferences into a society result.

    Each contribution is (agent_id, preference, belief_weight,
    utility_weight).  Belief weights are renormalized to sum to one;
    utility weights are applied as given.  fsum keeps the aggregation
    independent of contributor order.
    """
    concerned = profile.concerned
    live = [(i, p, bw, uw) for i, p, bw, uw in contribs if not p.is_indifferent]
    if not live:
        return SwfResult(INDIFFERENT, None, None, (), (), concerned)
    total_bw = fsum(bw for _, _, bw, _ in live)
    if total_bw <= 0.0:
        raise ValueError("belief weights must have positive total")
    bps = merged_breakpoints([p.belief for _, p, bw, _ in live if bw > 0.0])
    values = []
    for s in range(len(bps) - 1):
        mid = 0.5 * (bps[s] + bps[s + 1])
        values.append(
            fsum((bw / total_bw) * p.belief.value_at(mid) for _, p, bw, _ in live if bw > 0.0)
        )
    belief = Density(bps, tuple(values))
    labels = profile.space.labels
    raw = tuple(
        (lab, fsum(uw * p.utility.value(lab) for _, p, _, uw in live)) for lab in labels
    )
    norm = normalize_utility({lab: v for lab, v in raw}, profile.space)
    pref = INDIFFERENT if norm is None else Preference(belief, norm)
    return SwfResult(
        pref,
        belief,
        raw,
        tuple((i, bw) for i, _, bw, _ in live),
        tuple((i, uw) for i, _, _, uw in live),
        concerned,
    )


def baru(profile: Profile) -> SwfResult:
    """Belief-averaging relative utilitarianism: equal weights for every
    concerned agent, indifferent agents ignored."""
    contribs = [(i, profile.agents[i], 1.0, 1.0) for i in profile.concerned]
    return _merge(profile, contribs)


@dataclass(frozen=True)
class WeightedAggregation:
    """Positive per-agent weights for beliefs and utilities separately."""

    belief: tuple[float, ...]
    utility: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.belief) != len(self.utility):
            raise ValueError("weight vectors must have equal length")
        if any(w <= 0.0 for w in self.belief) or any(w <= 0.0 for w in self.utility):
            raise ValueError("weights must be strictly positive")


def weighted(profile: Profile, weights: WeightedAggregation) -> SwfResult:
    """Weighted variant: belief weights are renormalized over the
    concerned agents, utility weights renormalized to mean one so that
    scale-equivalent weight vectors aggregate identically."""
    if len(weights.belief) != len(profile.agents):
        raise ValueError("need one weight per agent")
    mean_uw = fsum(weights.utility) / len(weights.utility)
    contribs = [
        (i, profile.agents[i], weights.belief[i], weights.utility[i] / mean_uw)
        for i in profile.concerned
    ]
    return _merge(profile, contribs)


def prop1_weighted(
    profile: Profile,
    belief_weight: Callable[[Preference], float],
    utility_weight: Callable[[Preference], float] | None = None,
) -> SwfResult:
    """Weights computed from each concerned preference itself."""
    uw_fn = utility_weight if utility_weight is not None else belief_weight
    contribs = []
    for i in profile.concerned:
        p = profile.agents[i]
        bw, uw = belief_weight(p), uw_fn(p)
        if bw <= 0.0 or uw <= 0.0:
            raise ValueError("preference-derived weights must be positive")
        contribs.append((i, p, bw, uw))
    return _merge(profile, contribs)


# ---------------------------------------------------------------------------
# swf1: Nash-bargaining weights


def _max_product_polygon(verts: Sequence[tuple[float, float]]) -> tuple[float, float]:
    """Maximise x*y over a convex polygon given CCW vertices."""
    cands = list(verts)
    k = len(verts)
    if k >= 2:
        for t in range(k):
            (x0, y0), (x1, y1) = verts[t], verts[(t + 1) % k]
            dx, dy = x1 - x0, y1 - y0
            if abs(dx) > 1e-15 and abs(dy) > 1e-15:
                ts = -(dx * y0 + dy * x0) / (2.0 * dx * dy)
                if 0.0 < ts < 1.0:
                    cands.append((x0 + ts * dx, y0 + ts * dy))
    def prod(p: tuple[float, float]) -> float:
        return max(p[0], 0.0) * max(p[1], 0.0)

    best = max(cands, key=prod)
    best_prod = prod(best)
    for p in cands:
        # Distinct near-tied maximisers mean the weights are not pinned
        # down.  The product is quadratically flat around the tangency, so
        # candidates within ~sqrt(prod tol) of the maximiser tie by noise;
        # only far-apart ties (possible when the input is not a convex CCW
        # polygon, never for a profile image) signal real degeneracy.
        if prod(p) >= best_prod - 1e-9 * max(1.0, best_prod):
            if max(abs(p[0] - best[0]), abs(p[1] - best[1])) > 1e-3:
                raise DegenerateNashPoint(
                    f"bargaining point is not unique: {best!r} vs {p!r}"
                )
    return best


def _canonical_order(profile: Profile) -> list[int]:
    """Positions of the concerned agents sorted by preference content, so
    that relabelling the agents cannot change the solver's float path."""
    labs = profile.space.labels
    keys = []
    for pos, i in enumerate(profile.concerned):
        p = profile.agents[i]
        keys.append(
            (
                p.belief.breakpoints,
                p.belief.values,
                tuple(p.utility.value(lab) for lab in labs),
                pos,
            )
        )
    return [k[-1] for k in sorted(keys)]


def _nash_point(profile: Profile) -> np.ndarray:
    geom = geometry_for(profile)
    n = geom.dimension
    if n == 1:
        hi = float(geom.tensor.max(axis=1).sum(axis=0)[0])
        return np.array([hi])
    if n == 2:
        x, y = _max_product_polygon(minkowski_polygon(geom))
        return np.array([x, y])
    perm = _canonical_order(profile)
    x_canon = _nash_frank_wolfe(np.ascontiguousarray(geom.tensor[:, :, perm]))
    out = np.empty(n)
    out[perm] = x_canon
    return out


def _polish_face(P: np.ndarray, lam: np.ndarray) -> np.ndarray:
    """Maximise sum(log(P.T @ lam)) over the simplex restricted to the
    atoms in P, by projected Newton steps.  Returns refined weights."""
    m = P.shape[0]
    ones = np.ones(m)

    def objective(l: np.ndarray) -> float:
        x = P.T @ l
        if np.min(x) <= 0.0:
            return -np.inf
        return float(np.sum(np.log(x)))

    f = objective(lam)
    for _ in range(60):
        x = P.T @ lam
        g = P @ (1.0 / x)
        B = P / x  # rows scaled: B_kj = P_kj / x_j
        H = -(B @ B.T)
        kkt = np.zeros((m + 1, m + 1))
        kkt[:m, :m] = H - 1e-13 * np.eye(m)
        kkt[:m, m] = ones
        kkt[m, :m] = ones
        rhs = np.zeros(m + 1)
        rhs[:m] = -g
        try:
            sol = np.linalg.solve(kkt, rhs)
        except np.linalg.LinAlgError:
            sol, *_ = np.linalg.lstsq(kkt, rhs, rcond=None)
        d = sol[:m]
        if float(np.abs(d).max()) < 1e-16:
            break
        tmax = 1.0
        neg = d < 0.0
        if neg.any():
            tmax = min(tmax, float(np.min(-lam[neg] / d[neg])))
        step = tmax
        improved = False
        for _ in range(40):
            cand = np.maximum(lam + step * d, 0.0)
            cand /= cand.sum()
            fc = objective(cand)
            if fc > f:
                lam, f, improved = cand, fc, True
                break
            step *= 0.5
        if not improved:
            break
    return lam


def _nash_frank_wolfe(tensor: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Maximise sum(log x_i) over the image polytope.

    Stage one is pairwise Frank-Wolfe with per-segment argmax as the
    linear oracle; the FW gap bounds the log-product suboptimality.
    Stage two polishes over the discovered face by Newton steps and keeps
    adding oracle atoms until the gap certifies the point to `tol`.
    """
    S, X, n = tensor.shape
    seg = np.arange(S)

    def point_of(key: tuple[int, ...]) -> np.ndarray:
        return tensor[seg, list(key), :].sum(axis=0)

    weights: dict[tuple[int, ...], float] = {}
    points: dict[tuple[int, ...], np.ndarray] = {}
    for x in range(X):
        key = (x,) * S
        weights[key] = 1.0 / X
        points[key] = point_of(key)
    cur = sum(w * points[k] for k, w in weights.items())
    for it in range(50_000):
        grad = 1.0 / np.maximum(cur, 1e-300)
        scores = tensor @ grad  # (S, X)
        key = tuple(int(v) for v in scores.argmax(axis=1))
        if key not in points:
            points[key] = point_of(key)
        toward = points[key]
        gap = float(grad @ (toward - cur))
        if gap <= max(1e-8, tol):
            break
        away_key = min(weights, key=lambda k: float(grad @ points[k]))
        direction = toward - points[away_key]
        if float(np.abs(direction).max()) < 1e-15:
            break
        tmax = weights[away_key]
        neg = direction < 0.0
        if neg.any():
            tmax = min(tmax, float(np.min(-cur[neg] / direction[neg])) * (1.0 - 1e-12))
        if tmax <= 0.0:
            break

        def slope(t: float) -> float:
            return float(np.sum(direction / (cur + t * direction)))

        if slope(tmax) >= 0.0:
            step = tmax
        else:
            lo, hi = 0.0, tmax
            for _ in range(80):
                mid = 0.5 * (lo + hi)
                if slope(mid) > 0.0:
                    lo = mid
                else:
                    hi = mid
            step = 0.5 * (lo + hi)
        if step <= 0.0:
            break
        weights[key] = weights.get(key, 0.0) + step
        weights[away_key] -= step
        if weights[away_key] <= 1e-15:
            del weights[away_key]
        cur = cur + step * direction
        if it % 64 == 63:
            cur = sum(w * points[k] for k, w in weights.items())

    # polish: exact maximisation over the discovered face, re-querying the
    # oracle until no atom improves the certified gap
    keys = sorted(weights)
    lam = np.array([weights[k] for k in keys])
    lam /= lam.sum()
    for _ in range(40):
        P = np.array([points[k] for k in keys])
        lam = _polish_face(P, lam)
        keep = lam > 1e-14
        if not keep.all():
            keys = [k for k, kp in zip(keys, keep) if kp]
            lam = lam[keep]
            lam /= lam.sum()
            P = np.array([points[k] for k in keys])
        cur = P.T @ lam
        grad = 1.0 / np.maximum(cur, 1e-300)
        scores = tensor @ grad
        key = tuple(int(v) for v in scores.argmax(axis=1))
        if key not in points:
            points[key] = point_of(key)
        gap = float(grad @ (points[key] - cur))
        if gap <= tol * n or key in keys:
            break
        keys.append(key)
        lam = np.append(lam * (1.0 - 1e-3), 1e-3)
    return cur


def swf1(profile: Profile) -> SwfResult:
    """Nash-weighted rule: utility weight of agent i is the product of the
    other agents' coordinates at the bargaining point of the image."""
    concerned = profile.concerned
    if not concerned:
        return SwfResult(INDIFFERENT, None, None, (), (), ())
    point = _nash_point(profile)
    product = float(np.prod(point))
    if product <= TOL_MEASURE:
        raise DegenerateNashPoint(f"nash product {product!r} is not positive")
    contribs = []
    for pos, i in enumerate(concerned):
        w = product / float(point[pos])
        contribs.append((i, profile.agents[i], 1.0, w))
    return _merge(profile, contribs)


# ---------------------------------------------------------------------------
# swf2: anchor-distance weights


def swf2(profile: Profile, anchor: Preference) -> SwfResult:
    """Weights 2 - d(anchor, agent) where d is the preference distance;
    agents closer to the anchor preference count for more."""
    if anchor.is_indifferent:
        raise ValueError("anchor preference must be represented")
    return prop1_weighted(profile, lambda p: 2.0 - preference_distance(anchor, p))


# ---------------------------------------------------------------------------
# swf3: phantom contributor


def swf3(profile: Profile, phantom: Preference) -> SwfResult:
    """Adds a fixed phantom preference alongside the concerned agents.
    The phantom speaks even when nobody is concerned."""
    if phantom.is_indifferent:
        raise ValueError("phantom preference must be represented")
    contribs = [(i, profile.agents[i], 1.0, 1.0) for i in profile.concerned]
    contribs.append((PHANTOM_ID, phantom, 1.0, 1.0))
    return _merge(profile, contribs)


# ---------------------------------------------------------------------------
# swf4: belief imposition


def swf4(profile: Profile) -> SwfResult:
    """Takes the society belief from the first agent whenever that agent is
    concerned (utilities still summed equally)."""
    concerned = profile.concerned
    if not concerned:
        return SwfResult(INDIFFERENT, None, None, (), (), ())
    dictator = 0 if 0 in concerned else concerned[0]
    contribs = [
        (i, profile.agents[i], 1.0 if i == dictator else 0.0, 1.0) for i in concerned
    ]
    return _merge(profile, contribs)


# ---------------------------------------------------------------------------
# swf5: multiplicity weights


def _same_preference(p: Preference, q: Preference) -> bool:
    if p.is_indifferent or q.is_indifferent:
        return False
    if belief_distance(p.belief, q.belief) > TOL_EXACT:
        return False
    return all(
        abs(p.utility.value(lab) - q.utility.value(lab)) <= TOL_EXACT
        for lab in p.utility.labels
    )


def swf5(profile: Profile, alpha: Callable[[int], float] | None = None) -> SwfResult:
    """Each distinct concerned preference enters once with weight
    alpha(multiplicity); the default alpha(m) = m**2 over-counts shared
    preferences relative to proportional weighting."""
    a = alpha if alpha is not None else (lambda m: float(m * m))
    groups: list[list[int]] = []
    for i in profile.concerned:
        for grp in groups:
            if _same_preference(profile.agents[grp[0]], profile.agents[i]):
                grp.append(i)
                break
        else:
            groups.append([i])
    contribs = []
    for grp in groups:
        w = a(len(grp))
        if w <= 0.0:
            raise ValueError("multiplicity weights must be positive")
        for i in grp:
            contribs.append((i, profile.agents[i], w / len(grp), w / len(grp)))
    return _merge(profile, contribs)


# ---------------------------------------------------------------------------
# swf6: positional double weight


def swf6(profile: Profile) -> SwfResult:
    """First listed agent counts twice, in belief and utility alike."""
    n = len(profile.agents)
    w = tuple(2.0 if i == 0 else 1.0 for i in range(n))
    return weighted(profile, WeightedAggregation(w, w))


# ---------------------------------------------------------------------------
# comparison scores and opinion pooling


def ex_ante_scores(profile: Profile, acts: Sequence[Act]) -> tuple[float, ...]:
    """Sum over concerned agents of each agent's own expected utility,
    per act.  The ex-ante utilitarian reference point."""
    return tuple(
        fsum(expected_utility(profile.agents[i], act) for i in profile.concerned)
        for act in acts
    )


def geometric_pool(densities: Sequence[Density]) -> Density:
    """Normalized geometric mean of densities.  Raises NullPool when the
    product vanishes almost everywhere."""
    if not densities:
        raise ValueError("need at least one density")
    n = len(densities)
    bps = merged_breakpoints(densities)
    vals = []
    for s in range(len(bps) - 1):
        mid = 0.5 * (bps[s] + bps[s + 1])
        prod = 1.0
        for d in densities:
            prod *= d.value_at(mid)
        vals.append(prod ** (1.0 / n) if prod > 0.0 else 0.0)
    total = fsum(v * (bps[s + 1] - bps[s]) for s, v in enumerate(vals))
    if total <= TOL_EXACT:
        raise NullPool("pooled density integrates to zero")
    return Density(bps, tuple(v / total for v in vals))


# ---------------------------------------------------------------------------
# registry

RULE_NAMES = ("baru", "swf1", "swf2", "swf3", "swf4", "swf5", "swf6")


def ramp_utility(space) -> Utility:
    """Evenly spaced utility over the space's labels in listed order."""
    n = len(space.labels)
    return Utility({lab: k / (n - 1) for k, lab in enumerate(space.labels)})


def default_anchor(space) -> Preference:
    """Canonical anchor/phantom preference: uniform belief, ramp utility."""
    return Preference(Density.uniform(), ramp_utility(space))


def rule_by_name(
    name: str, anchor: Preference | None = None
) -> Callable[[Profile], SwfResult]:
    """Look up a rule as a profile -> result callable.  swf2 and swf3 take
    an anchor/phantom preference; without one, the canonical anchor for
    the profile's own outcome space is used."""
    if name == "baru":
        return baru
    if name == "swf1":
        return swf1
    if name == "swf2":
        return lambda pr: swf2(pr, anchor if anchor is not None else default_anchor(pr.space))
    if name == "swf3":
        return lambda pr: swf3(pr, anchor if anchor is not None else default_anchor(pr.space))
    if name == "swf4":
        return swf4
    if name == "swf5":
        return swf5
    if name == "swf6":
        return swf6
    raise ValueError(f"unknown rule {name!r}")
