"""Shared generators for randomized path tests."""

import numpy as np

from pathminima.cspace import Path


def random_free_config(ps, rng, attempts=1000):
    space = ps.space
    for _ in range(attempts):
        x = space.normalize(space.lows + rng.uniform(0, 1, space.dim) * space.extents)
        if ps.free(x):
            return x
    raise RuntimeError("free-space sampling failed")


def random_free_path(ps, rng, n_segments=None, attempts=200):
    """Waypoint chain whose consecutive segments pass the collision check."""
    k = int(rng.integers(2, 6)) if n_segments is None else n_segments
    pts = [random_free_config(ps, rng)]
    while len(pts) < k + 1:
        for _ in range(attempts):
            cand = random_free_config(ps, rng)
            if ps.segment_free(pts[-1], cand):
                pts.append(cand)
                break
        else:
            # dead end in a cluttered pocket: restart the chain
            pts = [random_free_config(ps, rng)]
    return Path(np.asarray(pts), ps.space)


def random_path_between(ps, a, b, rng, n_mid=2, attempts=400):
    """Free path with pinned endpoints, random in between."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    for _ in range(attempts):
        pts = [a]
        ok = True
        for _ in range(n_mid):
            for _ in range(attempts):
                cand = random_free_config(ps, rng)
                if ps.segment_free(pts[-1], cand):
                    pts.append(cand)
                    break
            else:
                ok = False
                break
        if ok and ps.segment_free(pts[-1], b):
            pts.append(b)
            return Path(np.asarray(pts), ps.space)
    raise RuntimeError("no free path between the endpoints")


def car_slit_route(start, goal, sign, rng):
    """Start-goal route through the top (sign=+1) or bottom (sign=-1) wall
    opening of the walled-room world, jittered inside the safe corridor."""
    y1 = sign * rng.uniform(0.95, 1.05)
    y2 = sign * rng.uniform(0.95, 1.05)
    x1 = -rng.uniform(0.45, 0.75)
    x2 = rng.uniform(0.45, 0.75)
    return np.array([
        [start[0], start[1]],
        [x1, y1],
        [x2, y2],
        [goal[0], goal[1]],
    ])
