"""Path optimizer: randomized shortcutting plus deterministic vertex
reduction. Its fixed points are what the rest of the system treats as local
minima of the length cost.

Both operations replace a subpath with the metric geodesic between its ends.
On circle axes a replacement is only applied when it preserves the subpath's
net angular lift, so winding classes survive optimization; without this
guard every long-way route on a circle factor would collapse onto the short
arc even when that is the only thing distinguishing two minima.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cspace import Path, PlanningSpace, dedup_waypoints, wrap_angle

_LIFT_TOL = 1e-9

# rounds keep running until they gain less than this fraction of
# convergence_tol. Stopping at the full tolerance leaves paths that wrap
# smooth obstacle boundaries right at the stability edge: a lucky re-run
# can then still harvest almost a full tolerance of corner crumbs
_SETTLE = 0.25


@dataclass
class OptimizerParams:
    shortcut_rounds: int = 50
    vertex_reduction_passes: int = 1
    convergence_tol: float = 0.01
    h: float | None = None
    seed: int = 0
    max_rounds: int = 64

    def __post_init__(self):
        if self.shortcut_rounds < 0:
            raise ValueError("shortcut_rounds must be >= 0")
        if self.vertex_reduction_passes < 1:
            raise ValueError("vertex_reduction_passes must be >= 1")
        if not 0.0 < self.convergence_tol <= 0.1:
            raise ValueError("convergence_tol must be in (0, 0.1]")


def optimize(path: Path, ps: PlanningSpace, params: OptimizerParams, rng: np.random.Generator | None = None) -> Path:
    """Shorten a collision-free path until the relative improvement per
    round falls below convergence_tol. Endpoints are preserved and the cost
    never increases."""
    h = params.h if params.h is not None else ps.default_h
    if rng is None:
        rng = np.random.default_rng(params.seed)
    # the input may come from another resolution-h validation with differently
    # placed samples, so allow grazing up to half a step when vetting it
    if not ps.path_free(path, h, shrink=0.5 * h):
        raise ValueError("optimize requires a collision-free input path")
    cur = path
    for _ in range(params.max_rounds):
        c0 = cur.length
        if c0 == 0.0:
            break
        for _ in range(params.shortcut_rounds):
            t1, t2 = np.sort(rng.uniform(0.0, 1.0, 2))
            cand = _try_shortcut(cur, float(t1), float(t2), ps, h)
            if cand is not None:
                cur = cand
        cur = _reduce_vertices(cur, ps, h)
        cur = _pull_vertices(cur, ps, h)
        if (c0 - cur.length) < _SETTLE * params.convergence_tol * c0:
            # stalled; corner chamfers are the one escape the moves above
            # cannot express (they add vertices). Gains below the floor are
            # skipped: hair-splitting chamfers balloon the vertex count on
            # any smooth wall-hugging arc without moving the cost
            cur = _chamfer_corners(cur, ps, h, 1e-4 * params.convergence_tol * cur.length)
            cur = _pull_vertices(cur, ps, h)
            if (c0 - cur.length) < _SETTLE * params.convergence_tol * c0:
                break
    for _ in range(params.vertex_reduction_passes):
        cur = _reduce_vertices(cur, ps, h)
    return cur


def is_fixed_point(path: Path, ps: PlanningSpace, params: OptimizerParams, rng: np.random.Generator | None = None) -> bool:
    """True when another optimizer run cannot improve the cost by more than
    convergence_tol relative."""
    if rng is None:
        rng = np.random.default_rng(params.seed)
    if path.length == 0.0:
        return True
    better = optimize(path, ps, params, rng)
    return (path.length - better.length) <= params.convergence_tol * path.length


def _winding_preserved(path: Path, t1: float, t2: float, a: np.ndarray, b: np.ndarray) -> bool:
    ci = path.space.circle_idx
    if not len(ci):
        return True
    lifts = path.lift_many(np.array([t1, t2]))
    net = lifts[1] - lifts[0]
    direct = wrap_angle(b[ci] - a[ci])
    return bool(np.all(np.abs(net - direct) < np.pi))


def _try_shortcut(path: Path, t1: float, t2: float, ps: PlanningSpace, h: float) -> Path | None:
    if t2 - t1 <= 0.0 or path.length == 0.0:
        return None
    a = path.eval(t1)
    b = path.eval(t2)
    if not _winding_preserved(path, t1, t2, a, b):
        return None
    d = path.space.distance(a, b)
    s1 = t1 * path.length
    s2 = t2 * path.length
    i1 = int(np.searchsorted(path.cum_lengths, s1, side="right") - 1)
    i2 = int(np.searchsorted(path.cum_lengths, s2, side="right") - 1)
    i1 = min(max(i1, 0), len(path.waypoints) - 2)
    i2 = min(max(i2, 0), len(path.waypoints) - 2)
    if d >= (s2 - s1) - 1e-12:
        return None
    if not ps.segment_free(a, b, h):
        return None
    # the cut points split two old segments; their halves get fresh sampling
    # grids, so validate them directly or a later whole-path recheck could
    # probe points the construction never did
    if not ps.segment_free(path.waypoints[i1], a, h):
        return None
    if not ps.segment_free(b, path.waypoints[i2 + 1], h):
        return None
    wps = np.vstack([path.waypoints[: i1 + 1], a[None, :], b[None, :], path.waypoints[i2 + 1 :]])
    wps = dedup_waypoints(wps, path.space)
    cand = Path(wps, path.space, level=path.level)
    if cand.length < path.length - 1e-12:
        return cand
    return None


def _chamfer_corners(path: Path, ps: PlanningSpace, h: float, min_gain: float) -> Path:
    """Cut corners by replacing a vertex with two points on its incident
    segments. Pulling alone cannot add vertices, so a path can stall where
    the remaining slack sits in a single corner whose chord toward the
    neighbor midpoint is blocked; the chamfer ladder opens exactly that
    move. Corners taut against an obstacle reject every chord and survive."""
    space = path.space
    ci = space.circle_idx
    wps = [w.copy() for w in path.waypoints]
    moved = False
    # single sweep: growth stays bounded at one split per corner, and the
    # caller's round loop provides iteration with pulls and pruning between
    i = 1
    while i < len(wps) - 1:
        a, v, b = wps[i - 1], wps[i], wps[i + 1]
        if (space.distance(a, v) + space.distance(v, b)) - space.distance(a, b) <= min_gain:
            i += 1
            continue
        split = False
        for s in (0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625, 2.0**-7, 2.0**-8):
            p1 = space.interpolate(v, a, s)
            p2 = space.interpolate(v, b, s)
            gain = (space.distance(p1, v) + space.distance(v, p2)) - space.distance(p1, p2)
            if gain <= min_gain:
                continue
            if len(ci):
                net = wrap_angle(v[ci] - p1[ci]) + wrap_angle(p2[ci] - v[ci])
                if np.any(np.abs(net - wrap_angle(p2[ci] - p1[ci])) >= np.pi):
                    continue
            if (ps.segment_free(p1, p2, h) and ps.segment_free(a, p1, h)
                    and ps.segment_free(p2, b, h)):
                wps[i : i + 1] = [p1, p2]
                moved = True
                split = True
                break
        i += 2 if split else 1
    if not moved:
        return path
    return Path(np.array(wps), space, level=path.level)


def _pull_vertices(path: Path, ps: PlanningSpace, h: float) -> Path:
    """Slide interior waypoints toward the geodesic midpoint of their
    neighbors. Randomized shortcutting stalls a hair short of obstacle-corner
    tangencies; this deterministic polish closes that last gap so a second
    optimizer run cannot keep shaving the same corner."""
    space = path.space
    ci = space.circle_idx
    wps = [w.copy() for w in path.waypoints]
    moved = False
    for _ in range(40):
        changed = False
        for i in range(1, len(wps) - 1):
            a, v, b = wps[i - 1], wps[i], wps[i + 1]
            base = space.distance(a, v) + space.distance(v, b)
            if base - space.distance(a, b) <= 1e-12:
                continue
            mid = space.interpolate(a, b, 0.5)
            # near a tangency only a small blend stays feasible, so the
            # ladder reaches far down; each pass then contracts the gap
            # geometrically
            for lam in (1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625, 2.0**-7, 2.0**-8):
                cand = space.interpolate(v, mid, lam)
                gain = base - (space.distance(a, cand) + space.distance(cand, b))
                if gain <= 1e-12:
                    continue
                if len(ci):
                    # the move must not change how the two hops wind
                    net_old = wrap_angle(v[ci] - a[ci]) + wrap_angle(b[ci] - v[ci])
                    net_new = wrap_angle(cand[ci] - a[ci]) + wrap_angle(b[ci] - cand[ci])
                    if np.any(np.abs(net_new - net_old) >= np.pi):
                        continue
                if ps.segment_free(a, cand, h) and ps.segment_free(cand, b, h):
                    wps[i] = cand
                    changed = moved = True
                    break
        if not changed:
            break
    if not moved:
        return path
    return Path(np.array(wps), space, level=path.level)


def _reduce_vertices(path: Path, ps: PlanningSpace, h: float) -> Path:
    """Drop interior waypoints whose neighbors see each other. Deterministic
    left-to-right sweeps until stable."""
    wps = [w for w in path.waypoints]
    space = path.space
    ci = space.circle_idx
    changed = True
    while changed and len(wps) > 2:
        changed = False
        i = 1
        while i < len(wps) - 1:
            a, mid, b = wps[i - 1], wps[i], wps[i + 1]
            if len(ci):
                net = wrap_angle(mid[ci] - a[ci]) + wrap_angle(b[ci] - mid[ci])
                direct = wrap_angle(b[ci] - a[ci])
                if np.any(np.abs(net - direct) >= np.pi):
                    i += 1
                    continue
            gain = space.distance(a, mid) + space.distance(mid, b) - space.distance(a, b)
            if gain > 1e-12 and ps.segment_free(a, b, h):
                del wps[i]
                changed = True
            else:
                i += 1
    if len(wps) == len(path.waypoints):
        return path
    return Path(np.array(wps), space, level=path.level)
