"""Image geometry of a profile: the set of achievable expected-utility
vectors across the concerned agents.

On a common refinement of the concerned beliefs every act can be replaced,
without changing anyone's expectation, by per-segment allocation fractions;
the image of all acts is therefore the Minkowski sum over segments of the
convex hulls of the per-outcome contribution points.  Its support function
has the closed form

    h(c) = sum over segments of max over outcomes of  c . contribution,

which this module evaluates exactly, along with attaining acts, vertex
recovery by rotating directions, and an exact Minkowski-sum polygon for the
two-agent case.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import atan2, cos, pi, sin, sqrt
from typing import Sequence

import numpy as np

from .measure import Coarsening, Density, pushforward_coarsening, merged_breakpoints, segment_masses, TOL_MEASURE
from .prefs import Act, Profile

# Direction-set sizes for support-function work, by dimension.
_DIRS_DIM2 = 720
_DIRS_DIM3 = 1000
_DIRS_HIGH = 2000
_HIGH_DIM_SEED = 20240801


def direction_set(dim: int) -> np.ndarray:
    """Deterministic probing directions: evenly rotated at dimension 2,
    a symmetrised Fibonacci sphere at dimension 3, seeded Gaussian
    directions (also symmetrised) above that."""
    if dim < 1:
        raise ValueError("dimension must be positive")
    if dim == 1:
        return np.array([[1.0], [-1.0]])
    if dim == 2:
        angles = 2.0 * pi * np.arange(_DIRS_DIM2) / _DIRS_DIM2
        return np.column_stack([np.cos(angles), np.sin(angles)])
    if dim == 3:
        half = _DIRS_DIM3 // 2
        ks = np.arange(half)
        z = 1.0 - (2.0 * ks + 1.0) / half
        r = np.sqrt(np.maximum(1.0 - z * z, 0.0))
        golden = pi * (3.0 - sqrt(5.0))
        theta = golden * ks
        pts = np.column_stack([r * np.cos(theta), r * np.sin(theta), z])
        return np.vstack([pts, -pts])
    rng = np.random.default_rng(_HIGH_DIM_SEED)
    pts = rng.standard_normal((_DIRS_HIGH // 2, dim))
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    return np.vstack([pts, -pts])


@dataclass(frozen=True)
class ProfileGeometry:
    """Per-segment contribution tensor of a profile (or a restriction of
    one): tensor[s, x, i] = belief_i(segment s) * utility_i(outcome x)."""

    agent_ids: tuple[int, ...]
    labels: tuple[str, ...]
    breakpoints: tuple[float, ...]
    tensor: np.ndarray = field(compare=False)

    @property
    def dimension(self) -> int:
        return len(self.agent_ids)


def geometry_for(
    profile: Profile,
    coarsening: Coarsening | None = None,
    labels: Sequence[str] | None = None,
) -> ProfileGeometry:
    ids = profile.concerned
    if not ids:
        raise ValueError("image geometry needs at least one concerned agent")
    labs = tuple(labels) if labels is not None else profile.space.labels
    for lab in labs:
        if lab not in profile.space:
            raise ValueError(f"unknown outcome {lab!r}")
    beliefs = []
    for i in ids:
        d = profile.agents[i].belief
        beliefs.append(pushforward_coarsening(coarsening, d) if coarsening else d)
    bps = merged_breakpoints(beliefs)
    masses = np.array([segment_masses(d, bps) for d in beliefs])  # (n, S)
    utils = np.array(
        [[profile.agents[i].utility.value(lab) for lab in labs] for i in ids]
    )  # (n, X)
    tensor = masses.T[:, None, :] * utils.T[None, :, :]  # (S, X, n)
    return ProfileGeometry(ids, labs, bps, tensor)


def support_values(geom: ProfileGeometry, directions: np.ndarray) -> np.ndarray:
    """h(c) for each probing direction c."""
    scores = np.einsum("sxn,dn->dsx", geom.tensor, np.atleast_2d(directions))
    return scores.max(axis=2).sum(axis=1)


def _argmax_choices(geom: ProfileGeometry, direction: np.ndarray) -> np.ndarray:
    scores = geom.tensor @ np.asarray(direction, dtype=float)  # (S, X)
    return scores.argmax(axis=1)


def attaining_act(geom: ProfileGeometry, direction: Sequence[float]) -> Act:
    """An act achieving the support value in the given direction (taking
    the per-segment best outcome; ties break toward the first label)."""
    idx = _argmax_choices(geom, np.asarray(direction, dtype=float))
    pieces = [
        (geom.breakpoints[s], geom.breakpoints[s + 1], geom.labels[int(idx[s])])
        for s in range(len(idx))
    ]
    return Act.from_segments(pieces, merge=True)


def attained_points(geom: ProfileGeometry, directions: np.ndarray) -> np.ndarray:
    """EV vector of the attaining act for every direction."""
    dirs = np.atleast_2d(directions)
    scores = np.einsum("sxn,dn->dsx", geom.tensor, dirs)
    idx = scores.argmax(axis=2)  # (D, S)
    S = geom.tensor.shape[0]
    pts = np.empty((dirs.shape[0], geom.dimension))
    for d in range(dirs.shape[0]):
        pts[d] = geom.tensor[np.arange(S), idx[d], :].sum(axis=0)
    return pts


# ---------------------------------------------------------------------------
# exact two-dimensional geometry


def _hull2d(points: Sequence[tuple[float, float]]) -> list[tuple[float, float]]:
    """Convex hull, counter-clockwise, collinear points dropped."""
    pts = sorted(set((float(x), float(y)) for x, y in points))
    if len(pts) <= 2:
        return pts
    def half(seq):
        out: list[tuple[float, float]] = []
        for p in seq:
            while len(out) >= 2:
                ox, oy = out[-2]
                ax, ay = out[-1]
                if (ax - ox) * (p[1] - oy) - (ay - oy) * (p[0] - ox) <= 1e-14:
                    out.pop()
                else:
                    break
            out.append(p)
        return out
    lower = half(pts)
    upper = half(reversed(pts))
    return lower[:-1] + upper[:-1]


def minkowski_polygon(geom: ProfileGeometry) -> tuple[tuple[float, float], ...]:
    """Exact vertex list (CCW) of the two-agent image polytope, formed by
    chaining the sorted edges of the per-segment hulls."""
    if geom.dimension != 2:
        raise ValueError("exact polygon only at dimension 2")
    S = geom.tensor.shape[0]
    start = np.zeros(2)
    edges: list[tuple[float, float]] = []
    for s in range(S):
        hull = _hull2d([(p[0], p[1]) for p in geom.tensor[s]])
        anchor = min(hull, key=lambda p: (p[1], p[0]))
        start += anchor
        k = len(hull)
        for t in range(k):
            p, q = hull[t], hull[(t + 1) % k]
            if k >= 2:
                edges.append((q[0] - p[0], q[1] - p[1]))
    if not edges:
        return ((float(start[0]), float(start[1])),)
    edges.sort(key=lambda e: atan2(e[1], e[0]) % (2.0 * pi))
    walk = [(float(start[0]), float(start[1]))]
    for ex, ey in edges[:-1]:
        walk.append((walk[-1][0] + ex, walk[-1][1] + ey))
    # Parallel edges from different segments land as collinear runs; a hull
    # pass collapses them and dedupes coincident points.
    hull = _hull2d(walk)
    return tuple(hull) if hull else (walk[0],)


# ---------------------------------------------------------------------------
# the polytope object


@dataclass(frozen=True)
class ImagePolytope:
    """Support-function view of the image, with vertices recovered by the
    rotating-direction sweep where the dimension allows it."""

    agent_ids: tuple[int, ...]
    labels: tuple[str, ...]
    directions: tuple[tuple[float, ...], ...]
    support: tuple[float, ...]
    vertices: tuple[tuple[float, ...], ...] | None
    geometry: ProfileGeometry = field(compare=False)

    @property
    def dimension(self) -> int:
        return len(self.agent_ids)

    def support_of(self, direction: Sequence[float]) -> float:
        return float(support_values(self.geometry, np.asarray([direction], dtype=float))[0])

    def attaining_act(self, direction: Sequence[float]) -> Act:
        return attaining_act(self.geometry, direction)

    def contains(self, point: Sequence[float], tol: float = TOL_MEASURE) -> bool:
        p = np.asarray(point, dtype=float)
        dirs = np.asarray(self.directions)
        return bool(np.all(dirs @ p <= np.asarray(self.support) + tol))


def image_polytope(
    profile: Profile,
    restriction: tuple[Coarsening | None, Sequence[str] | None] | None = None,
    directions: np.ndarray | None = None,
) -> ImagePolytope:
    """Image polytope of the profile's concerned agents, optionally
    restricted to acts that factor through a coarsening and/or use only a
    subset of the outcomes."""
    coarsening, labels = restriction if restriction is not None else (None, None)
    geom = geometry_for(profile, coarsening, labels)
    dirs = direction_set(geom.dimension) if directions is None else np.atleast_2d(directions)
    support = support_values(geom, dirs)
    vertices: tuple | None = None
    if geom.dimension == 1:
        hi = float(support_values(geom, np.array([[1.0]]))[0])
        lo = -float(support_values(geom, np.array([[-1.0]]))[0])
        vertices = ((lo,), (hi,))
    elif geom.dimension == 2:
        pts = attained_points(geom, dirs)
        hull = _hull2d([(p[0], p[1]) for p in pts])
        vertices = tuple((float(x), float(y)) for x, y in hull)
    elif geom.dimension == 3:
        # each sweep direction lands on a vertex; dedupe at the measure
        # tolerance (resolution is bounded by the direction set)
        seen: list[tuple[float, float, float]] = []
        for p in attained_points(geom, dirs):
            q = (float(p[0]), float(p[1]), float(p[2]))
            if not any(max(abs(q[k] - s[k]) for k in range(3)) <= TOL_MEASURE for s in seen):
                seen.append(q)
        vertices = tuple(sorted(seen))
    return ImagePolytope(
        geom.agent_ids,
        geom.labels,
        tuple(tuple(float(v) for v in d) for d in dirs),
        tuple(float(h) for h in support),
        vertices,
        geom,
    )
