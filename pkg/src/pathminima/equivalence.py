"""Path equivalence via a visibility sweep.

Two paths sharing endpoints are considered the same minimum when the
straight-line homotopy between them stays collision free. The sweep is
sampled with rungs (geodesics between matched arc-length parameters) and
refined adaptively where adjacent rungs disagree. On circle axes the rung
geodesic is only meaningful while the two paths stay within half a turn of
each other, so the relative lift is checked first; beyond half a turn the
sweep would tear and the paths belong to different winding classes.

Paths produced by shortcut optimization are only collision free at the
segment validation resolution h: a taut path grazing a corner can carry a
penetration up to about h/2 deep whose extent along the path is far below
h. Such grazing must not read as a topological obstruction, so the sweep
checks its rungs against obstacles eroded by that half-step margin, and any
still-failing interval is refined only down to a width floor before being
forgiven under a capped total. Genuinely distinct minima are separated by
obstacles far thicker than the margin and keep failing over a wide stretch
of the sweep until the rung budget or the forgiveness cap runs out.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cspace import Path, PlanningSpace
from .optimize import OptimizerParams, optimize

_ENDPOINT_TOL = 1e-9


@dataclass
class VisibilityParams:
    n_rungs: int = 20
    max_rungs: int = 160
    h: float | None = None

    def __post_init__(self):
        if self.n_rungs < 2:
            raise ValueError("n_rungs must be >= 2")
        if self.max_rungs < self.n_rungs:
            raise ValueError("max_rungs must be >= n_rungs")


def is_visible(p: Path, q: Path, ps: PlanningSpace, params: VisibilityParams) -> bool:
    """Deformability test between two paths with identical endpoints."""
    space = p.space
    if q.space is not space and q.space != space:
        raise ValueError("paths live in different spaces")
    if space.distance(p.start, q.start) > _ENDPOINT_TOL or space.distance(p.goal, q.goal) > _ENDPOINT_TOL:
        raise ValueError("visibility is only defined for paths with shared endpoints")
    if p is q:
        return True

    ts = np.linspace(0.0, 1.0, params.n_rungs)
    ts = np.unique(np.concatenate([ts, p.param_of_waypoints(), q.param_of_waypoints()]))

    if len(space.circle_idx) and not _lift_compatible(p, q, ts):
        return False

    h = params.h if params.h is not None else ps.default_h
    # Compared paths are only collision free at resolution h, so they may
    # graze obstacles up to about half a validation step deep. Rungs are
    # therefore tested against obstacles eroded by that margin; a genuine
    # obstruction is orders of magnitude thicker and stays blocking.
    margin = 0.5 * h
    p_pts = p.eval_many(ts)
    q_pts = q.eval_many(ts)
    rung_ok = ps.segments_free_mask(p_pts, q_pts, h, margin)
    if not rung_ok[0] or not rung_ok[-1]:
        return False

    # Half a validation step along the shorter path. A failing interval
    # narrower than this is a sub-resolution artifact of a grazing path, not
    # topology, and may be forgiven; but only a couple of such punctures are
    # plausible per pair, so the total forgiven width is capped hard. A real
    # obstruction keeps failing over a stable fraction of the sweep however
    # finely it is split and blows through the cap.
    min_len = max(min(p.length, q.length), 1e-12)
    w_min = float(np.clip(0.5 * h / min_len, 1e-6, 0.01))
    forgive_cap = min(8.0 * w_min, 0.02)
    forgiven = 0.0

    # Adjacent rungs can both be free while the swept quadrilateral between
    # them is not; the diagonals catch most such cases. Failing intervals
    # (bad boundary rung or bad diagonal) are split until they pass, shrink
    # under the width floor, or the rung budget runs out. Work proceeds in
    # waves so each wave is a couple of batched collision queries.
    lo, hi = ts[:-1], ts[1:]
    lo_ok, hi_ok = rung_ok[:-1], rung_ok[1:]
    ends = {float(t): (p_pts[i], q_pts[i]) for i, t in enumerate(ts)}
    budget = max(0, params.max_rungs - len(ts))
    while len(lo):
        ok = lo_ok & hi_ok
        if ok.any():
            idx = np.nonzero(ok)[0]
            p_lo = np.stack([ends[float(t)][0] for t in lo[idx]])
            q_lo = np.stack([ends[float(t)][1] for t in lo[idx]])
            p_hi = np.stack([ends[float(t)][0] for t in hi[idx]])
            q_hi = np.stack([ends[float(t)][1] for t in hi[idx]])
            diag = ps.segments_free_mask(
                np.concatenate([p_lo, p_hi]), np.concatenate([q_hi, q_lo]), h, margin
            )
            ok[idx] = diag[: len(idx)] & diag[len(idx) :]
        widths = hi - lo
        forgiven += float(widths[~ok & (widths < w_min)].sum())
        if forgiven > forgive_cap:
            return False
        failing = np.nonzero(~ok & (widths >= w_min))[0]
        if not len(failing):
            return True
        if len(failing) > budget:
            return False
        budget -= len(failing)
        mids = 0.5 * (lo[failing] + hi[failing])
        pm = p.eval_many(mids)
        qm = q.eval_many(mids)
        mid_ok = ps.segments_free_mask(pm, qm, h, margin)
        for i, t in enumerate(mids):
            ends[float(t)] = (pm[i], qm[i])
        lo, hi = (
            np.concatenate([lo[failing], mids]),
            np.concatenate([mids, hi[failing]]),
        )
        lo_ok, hi_ok = (
            np.concatenate([lo_ok[failing], mid_ok]),
            np.concatenate([mid_ok, hi_ok[failing]]),
        )
    return True


def _lift_compatible(p: Path, q: Path, ts: np.ndarray) -> bool:
    """Relative circle lift between matched parameters must stay under half
    a turn, else the matched-parameter sweep crosses a winding boundary."""
    dense = np.unique(np.concatenate([ts, np.linspace(0.0, 1.0, 64)]))
    rel = q.lift_many(dense) - p.lift_many(dense)
    rel = rel - rel[0]
    return bool(np.all(np.abs(rel) < np.pi - 1e-9))


def minima_exists(q: Path, known: list[Path], ps: PlanningSpace, params: VisibilityParams) -> bool:
    """True when q is deformable onto one of the already known minima."""
    return any(is_visible(q, other, ps, params) for other in known)


def projection_equivalent(
    chain,
    child: Path,
    parent: Path | None,
    opt_params: OptimizerParams,
    vis_params: VisibilityParams,
    rng: np.random.Generator,
) -> bool:
    """Check that a candidate minimum projects onto its parent minimum one
    level down. The projected path is re-optimized in the parent's space
    before the visibility test. Children of the root are always accepted."""
    if parent is None:
        return True
    k_parent = parent.level
    proj = chain.project_path(child, child.level, k_parent)
    ps = chain.space(k_parent)
    if proj.length == 0.0 or parent.length == 0.0:
        return proj.length == 0.0 and parent.length == 0.0
    try:
        opt = optimize(proj, ps, opt_params, rng)
        return is_visible(opt, parent, ps, vis_params)
    except ValueError:
        return False
