"""Configuration spaces, product metrics, and piecewise-geodesic paths.

A space is a product of bounded Euclidean axes and unit circles. The metric
is the weighted product metric: Euclidean differences on Euclidean axes, the
shortest angular difference on circle axes, combined root-sum-of-squares.
Circle coordinates are stored normalized to [-pi, pi).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class EuclideanAxis:
    low: float
    high: float
    weight: float = 1.0

    def __post_init__(self):
        if not self.low < self.high:
            raise ValueError("euclidean axis needs low < high")
        if self.weight <= 0:
            raise ValueError("axis weight must be positive")

    @property
    def extent(self) -> float:
        return self.high - self.low


@dataclass(frozen=True)
class CircleAxis:
    weight: float = 1.0

    def __post_init__(self):
        if self.weight <= 0:
            raise ValueError("axis weight must be positive")

    @property
    def extent(self) -> float:
        return TWO_PI


class SpaceDescriptor:
    """Ordered product of EuclideanAxis and CircleAxis factors."""

    def __init__(self, factors):
        factors = tuple(factors)
        if not factors:
            raise ValueError("space needs at least one factor")
        self.factors = factors
        self.dim = len(factors)
        self.is_circle = np.array([isinstance(f, CircleAxis) for f in factors])
        self.weights = np.array([f.weight for f in factors])
        self.lows = np.array([-math.pi if c else f.low for f, c in zip(factors, self.is_circle)])
        self.highs = np.array([math.pi if c else f.high for f, c in zip(factors, self.is_circle)])
        self.extents = self.highs - self.lows
        self.measure = float(np.prod(self.extents))
        self.circle_idx = np.nonzero(self.is_circle)[0]
        euclid_extents = self.extents[~self.is_circle]
        self.min_euclid_extent = float(euclid_extents.min()) if len(euclid_extents) else TWO_PI

    def __eq__(self, other):
        return isinstance(other, SpaceDescriptor) and self.factors == other.factors

    def __hash__(self):
        return hash(self.factors)

    def __repr__(self):
        return f"SpaceDescriptor({list(self.factors)!r})"

    # -- metric ------------------------------------------------------------

    def diff(self, b: np.ndarray, a: np.ndarray) -> np.ndarray:
        """Displacement b - a with circle axes wrapped to [-pi, pi)."""
        d = np.asarray(b, dtype=float) - np.asarray(a, dtype=float)
        if len(self.circle_idx):
            d[..., self.circle_idx] = wrap_angle(d[..., self.circle_idx])
        return d

    def distance(self, a: np.ndarray, b: np.ndarray) -> float:
        d = self.diff(b, a) * self.weights
        return float(np.sqrt(np.sum(d * d)))

    def distance_many(self, X: np.ndarray, x: np.ndarray) -> np.ndarray:
        d = self.diff(X, x) * self.weights
        return np.sqrt(np.sum(d * d, axis=-1))

    def seg_lengths(self, waypoints: np.ndarray) -> np.ndarray:
        d = self.diff(waypoints[1:], waypoints[:-1]) * self.weights
        return np.sqrt(np.sum(d * d, axis=1))

    def distance_rows(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        d = self.diff(B, A) * self.weights
        return np.sqrt(np.sum(d * d, axis=-1))

    def interpolate_rows(self, A: np.ndarray, B: np.ndarray, ts: np.ndarray) -> np.ndarray:
        """Geodesic points for many segments at shared parameters: result
        has shape (len(A), len(ts), dim). Circle coordinates may leave
        [-pi, pi); callers that need wrapped values must normalize."""
        return A[:, None, :] + ts[None, :, None] * self.diff(B, A)[:, None, :]

    def interpolate(self, a: np.ndarray, b: np.ndarray, t: float) -> np.ndarray:
        if t == 0.0:
            return np.array(a, dtype=float)
        if t == 1.0:
            return np.array(b, dtype=float)
        return self.normalize(np.asarray(a, dtype=float) + t * self.diff(b, a))

    def interpolate_many(self, a: np.ndarray, b: np.ndarray, ts: np.ndarray) -> np.ndarray:
        out = np.asarray(a, dtype=float)[None, :] + ts[:, None] * self.diff(b, a)[None, :]
        out = self.normalize(out)
        out[ts == 0.0] = a
        out[ts == 1.0] = b
        return out

    def normalize(self, x: np.ndarray) -> np.ndarray:
        x = np.array(x, dtype=float)
        if len(self.circle_idx):
            # Wrap only out-of-range entries: already-wrapped values pass
            # through bit-identical, keeping normalization idempotent at the
            # float level (serialization round trips depend on this).
            sub = x[..., self.circle_idx]
            bad = (sub < -math.pi) | (sub >= math.pi)
            if np.any(bad):
                sub = np.where(bad, wrap_angle(sub), sub)
                x[..., self.circle_idx] = sub
        return x

    # -- sampling and bounds -------------------------------------------------

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return rng.uniform(self.lows, self.highs, size=(n, self.dim))

    def in_bounds(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(X)
        ok = np.ones(len(X), dtype=bool)
        euclid = ~self.is_circle
        if euclid.any():
            ok &= np.all(X[:, euclid] >= self.lows[euclid], axis=1)
            ok &= np.all(X[:, euclid] <= self.highs[euclid], axis=1)
        return ok


def wrap_angle(a):
    """Wrap angles to the interval [-pi, pi)."""
    return np.mod(np.asarray(a, dtype=float) + math.pi, TWO_PI) - math.pi


_LINSPACES: dict[int, np.ndarray] = {}


def _cached_linspace(n_seg: int) -> np.ndarray:
    ts = _LINSPACES.get(n_seg)
    if ts is None:
        ts = np.linspace(0.0, 1.0, n_seg + 1)
        ts.setflags(write=False)
        _LINSPACES[n_seg] = ts
    return ts


# ---------------------------------------------------------------------------
# paths
# ---------------------------------------------------------------------------


class Path:
    """Piecewise-geodesic path through a space, arc-length parameterized.

    Waypoints are stored as an (m, dim) array with m >= 2. Consecutive
    waypoints must be distinct, except for the degenerate two-point path with
    coincident endpoints (cost zero), which projections may produce.

    For every circle factor the path keeps a continuous angular lift along
    its waypoints, so winding behaviour is well defined for callers that
    need it (the optimizer and the visibility test).
    """

    def __init__(self, waypoints, space: SpaceDescriptor, level: int = 0):
        wp = np.array(waypoints, dtype=float)
        if wp.ndim != 2 or wp.shape[1] != space.dim or len(wp) < 2:
            raise ValueError("path needs an (m, dim) waypoint array with m >= 2")
        self.space = space
        self.level = level
        self.waypoints = space.normalize(wp)
        seg = space.seg_lengths(self.waypoints)
        if len(wp) > 2 and np.any(seg == 0.0):
            raise ValueError("consecutive path waypoints must be distinct")
        self.seg_lengths = seg
        self.cum_lengths = np.concatenate([[0.0], np.cumsum(seg)])
        self.length = float(self.cum_lengths[-1])
        ci = space.circle_idx
        if len(ci):
            steps = space.diff(self.waypoints[1:], self.waypoints[:-1])[:, ci]
            self.lifts = np.concatenate([self.waypoints[:1, ci], self.waypoints[:1, ci] + np.cumsum(steps, axis=0)])
        else:
            self.lifts = np.zeros((len(self.waypoints), 0))

    def __len__(self):
        return len(self.waypoints)

    @property
    def start(self) -> np.ndarray:
        return self.waypoints[0]

    @property
    def goal(self) -> np.ndarray:
        return self.waypoints[-1]

    def _locate(self, ts: np.ndarray):
        s = np.clip(np.asarray(ts, dtype=float), 0.0, 1.0) * self.length
        idx = np.searchsorted(self.cum_lengths, s, side="right") - 1
        idx = np.clip(idx, 0, len(self.waypoints) - 2)
        seg = self.seg_lengths[idx]
        u = np.where(seg > 0, (s - self.cum_lengths[idx]) / np.where(seg > 0, seg, 1.0), 0.0)
        return idx, u

    def eval_many(self, ts: np.ndarray) -> np.ndarray:
        ts = np.asarray(ts, dtype=float)
        idx, u = self._locate(ts)
        a = self.waypoints[idx]
        step = self.space.diff(self.waypoints[idx + 1], a)
        out = self.space.normalize(a + u[:, None] * step)
        out[ts <= 0.0] = self.waypoints[0]
        out[ts >= 1.0] = self.waypoints[-1]
        return out

    def eval(self, t: float) -> np.ndarray:
        return self.eval_many(np.array([t]))[0]

    def lift_many(self, ts: np.ndarray) -> np.ndarray:
        """Continuous circle-axis lift at arc-length fractions ts."""
        idx, u = self._locate(np.asarray(ts, dtype=float))
        base = self.lifts[idx]
        step = self.lifts[idx + 1] - self.lifts[idx]
        return base + u[:, None] * step

    def param_of_waypoints(self) -> np.ndarray:
        if self.length == 0:
            return np.zeros(len(self.waypoints))
        return self.cum_lengths / self.length

    def __eq__(self, other):
        return (
            isinstance(other, Path)
            and self.level == other.level
            and self.waypoints.shape == other.waypoints.shape
            and np.array_equal(self.waypoints, other.waypoints)
        )

    def __repr__(self):
        return f"Path(level={self.level}, m={len(self.waypoints)}, cost={self.length:.4f})"


def path_cost(path: Path) -> float:
    """Total metric length of the path; zero only for degenerate paths."""
    return path.length


def dedup_waypoints(waypoints: np.ndarray, space: SpaceDescriptor) -> np.ndarray:
    """Drop consecutive duplicates; keeps at least two rows."""
    keep = [0]
    for i in range(1, len(waypoints)):
        if space.distance(waypoints[keep[-1]], waypoints[i]) > 1e-12:
            keep.append(i)
    out = waypoints[keep]
    if len(out) == 1:
        out = np.vstack([out, out])
    return out


# ---------------------------------------------------------------------------
# planning space: space + world + robot
# ---------------------------------------------------------------------------


class PlanningSpace:
    """A configuration space bound to a workspace and a robot body.

    phi(x) is 1 exactly when the placed robot intersects an obstacle or x
    leaves the Euclidean bounds, else 0.
    """

    def __init__(self, space: SpaceDescriptor, world, robot):
        if robot.config_dim != space.dim:
            raise ValueError("robot expects a different configuration dimension")
        self.space = space
        self.world = world
        self.robot = robot

    @property
    def measure(self) -> float:
        return self.space.measure

    @property
    def default_h(self) -> float:
        return 0.01 * self.space.min_euclid_extent

    def phi_batch(self, X: np.ndarray, shrink: float = 0.0) -> np.ndarray:
        """Collision mask for a batch of configurations (True = invalid).

        shrink erodes the obstacles first; see the geometry module."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        bad = ~self.space.in_bounds(X)
        todo = ~bad
        if todo.any() and self.world.obstacles:
            bad[todo] = self.robot.collision_mask(self.world.obstacles, X[todo], shrink)
        return bad

    def phi(self, x: np.ndarray) -> int:
        return int(self.phi_batch(x[None, :])[0])

    def free(self, x: np.ndarray) -> bool:
        return self.phi(x) == 0

    def _segment_points(self, a: np.ndarray, b: np.ndarray, h: float) -> np.ndarray:
        d = self.space.distance(a, b)
        if d == 0.0:
            return np.asarray(a, dtype=float)[None, :]
        # power-of-two interior count so halving h only refines the sample set
        n_seg = 1 << max(0, math.ceil(math.log2(d / h)))
        return self.space.interpolate_many(a, b, _cached_linspace(n_seg))

    def segment_free(self, a: np.ndarray, b: np.ndarray, h: float | None = None) -> bool:
        h = self.default_h if h is None else h
        return not self.phi_batch(self._segment_points(a, b, h)).any()

    def segments_free_mask(self, A: np.ndarray, B: np.ndarray, h: float | None = None,
                           shrink: float = 0.0) -> np.ndarray:
        """Per-row segment check for many segments in few collision calls.
        Rows are grouped by their power-of-two sample count so each group is
        one batched evaluation."""
        h = self.default_h if h is None else h
        A = np.atleast_2d(np.asarray(A, dtype=float))
        B = np.atleast_2d(np.asarray(B, dtype=float))
        d = self.space.distance_rows(A, B)
        n_seg = np.ones(len(A), dtype=int)
        pos = d > 0.0
        n_seg[pos] = 1 << np.maximum(0, np.ceil(np.log2(d[pos] / h))).astype(int)
        out = np.ones(len(A), dtype=bool)
        for n in np.unique(n_seg):
            rows = np.nonzero(n_seg == n)[0]
            pts = self.space.interpolate_rows(A[rows], B[rows], _cached_linspace(int(n)))
            bad = self.phi_batch(pts.reshape(-1, self.space.dim), shrink).reshape(len(rows), n + 1)
            out[rows] = ~bad.any(axis=1)
        return out

    def path_free(self, path: Path, h: float | None = None, shrink: float = 0.0) -> bool:
        h = self.default_h if h is None else h
        chunks = [
            self._segment_points(path.waypoints[i], path.waypoints[i + 1], h)
            for i in range(len(path.waypoints) - 1)
        ]
        return not self.phi_batch(np.concatenate(chunks, axis=0), shrink).any()
