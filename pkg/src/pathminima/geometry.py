"""Workspace geometry: obstacle primitives, robot bodies, collision tests.

Every predicate is vectorized over a batch of configurations and treats
boundary contact as a collision (closed obstacles, closed robot bodies).

All predicates take a `shrink` margin that erodes the obstacles before
testing: a hit then requires penetration deeper than the margin. Erosion of
a convex set by a ball lowers its support function uniformly, so for the
separating-axis and distance tests the margin is a plain slack term.
Callers that compare discretely validated paths (which may graze obstacles
up to the validation resolution) use it to stay consistent with that
resolution; the default of zero keeps the strict closed-set semantics."""

from __future__ import annotations

import numpy as np

_EPS = 1e-12


# ---------------------------------------------------------------------------
# obstacle primitives
# ---------------------------------------------------------------------------


class CircleObstacle:
    """Closed disk obstacle in the plane."""

    dim = 2

    def __init__(self, center, radius: float):
        if radius <= 0:
            raise ValueError("circle obstacle radius must be positive")
        self.center = np.asarray(center, dtype=float).reshape(2)
        self.radius = float(radius)

    def hits_disk(self, points: np.ndarray, r: float, shrink: float = 0.0) -> np.ndarray:
        reff = self.radius + r - shrink
        if reff < 0:
            return np.zeros(len(points), dtype=bool)
        d2 = np.sum((points - self.center) ** 2, axis=1)
        return d2 <= reff * reff

    def to_dict(self) -> dict:
        return {"type": "circle", "center": [float(v) for v in self.center], "radius": float(self.radius)}


class ConvexPolygon:
    """Closed convex polygon obstacle, vertices stored counter-clockwise."""

    dim = 2

    def __init__(self, points):
        verts = np.asarray(points, dtype=float)
        if verts.ndim != 2 or verts.shape[1] != 2 or len(verts) < 3:
            raise ValueError("polygon needs at least 3 planar vertices")
        area2 = _signed_area2(verts)
        if abs(area2) < _EPS:
            raise ValueError("polygon is degenerate")
        if area2 < 0:
            verts = verts[::-1].copy()
        edges = np.roll(verts, -1, axis=0) - verts
        cross = edges[:, 0] * np.roll(edges, -1, axis=0)[:, 1] - edges[:, 1] * np.roll(edges, -1, axis=0)[:, 0]
        if np.any(cross <= 0):
            raise ValueError("polygon must be strictly convex")
        self.vertices = verts
        # outward unit normals, one per edge
        lengths = np.linalg.norm(edges, axis=1)
        self.normals = np.stack([edges[:, 1], -edges[:, 0]], axis=1) / lengths[:, None]
        self.offsets = np.sum(self.normals * verts, axis=1)
        self._edge_dirs = edges
        self._edge_len2 = np.maximum(np.sum(edges**2, axis=1), _EPS)
        # projection of the polygon onto its own normals (for SAT)
        proj = verts @ self.normals.T
        self._self_min = proj.min(axis=0)
        self._self_max = proj.max(axis=0)

    def signed_edge_distance(self, points: np.ndarray) -> np.ndarray:
        """Max over edges of the signed plane distance; <= 0 means inside."""
        return (points @ self.normals.T - self.offsets).max(axis=1)

    def boundary_distance(self, points: np.ndarray) -> np.ndarray:
        """Euclidean distance from each point to the polygon boundary."""
        rel = points[:, None, :] - self.vertices[None, :, :]
        t = np.einsum("nmk,mk->nm", rel, self._edge_dirs) / self._edge_len2
        t = np.clip(t, 0.0, 1.0)
        closest = self.vertices[None, :, :] + t[:, :, None] * self._edge_dirs[None, :, :]
        d2 = np.sum((points[:, None, :] - closest) ** 2, axis=2)
        return np.sqrt(d2.min(axis=1))

    def hits_disk(self, points: np.ndarray, r: float, shrink: float = 0.0) -> np.ndarray:
        s = (points @ self.normals.T - self.offsets).max(axis=1)
        reff = r - shrink
        if reff < 0:
            # for interior points -s is the exact distance to the boundary,
            # so this demands penetration deeper than the margin
            return s <= reff
        # For points outside a convex polygon the true boundary distance is
        # at least the largest signed edge-plane distance, so one matrix
        # product settles everything except a thin band near the boundary.
        hit = s <= 0.0
        if reff > 0:
            band = (s > 0.0) & (s <= reff)
            if band.any():
                hit[band] = self.boundary_distance(points[band]) <= reff
        return hit

    def to_dict(self) -> dict:
        return {"type": "polygon", "points": [[float(v) for v in p] for p in self.vertices]}


class Box:
    """Axis-aligned box obstacle in 3-space."""

    dim = 3

    def __init__(self, lo, hi):
        self.lo = np.asarray(lo, dtype=float).reshape(3)
        self.hi = np.asarray(hi, dtype=float).reshape(3)
        if np.any(self.hi - self.lo <= 0):
            raise ValueError("box extents must be positive")

    def hits_ball(self, points: np.ndarray, r: float, shrink: float = 0.0) -> np.ndarray:
        reff = r - shrink
        if reff < 0:
            inner = np.minimum(points - self.lo, self.hi - points).min(axis=1)
            return inner >= -reff
        clamped = np.clip(points, self.lo, self.hi)
        d2 = np.sum((points - clamped) ** 2, axis=1)
        return d2 <= reff * reff

    def to_dict(self) -> dict:
        return {"type": "box", "lo": [float(v) for v in self.lo], "hi": [float(v) for v in self.hi]}


class SphereObstacle:
    """Closed ball obstacle in 3-space."""

    dim = 3

    def __init__(self, center, radius: float):
        if radius <= 0:
            raise ValueError("sphere obstacle radius must be positive")
        self.center = np.asarray(center, dtype=float).reshape(3)
        self.radius = float(radius)

    def hits_ball(self, points: np.ndarray, r: float, shrink: float = 0.0) -> np.ndarray:
        reff = self.radius + r - shrink
        if reff < 0:
            return np.zeros(len(points), dtype=bool)
        d2 = np.sum((points - self.center) ** 2, axis=1)
        return d2 <= reff * reff

    def to_dict(self) -> dict:
        return {"type": "sphere", "center": [float(v) for v in self.center], "radius": float(self.radius)}


def _signed_area2(verts: np.ndarray) -> float:
    x, y = verts[:, 0], verts[:, 1]
    return float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


# ---------------------------------------------------------------------------
# oriented rectangles (rectangle robot bodies, arm links)
# ---------------------------------------------------------------------------


def obb_corners(centers, cos_t, sin_t, half_l, half_w):
    """Corner coordinates (n, 4, 2) of oriented rectangles."""
    u = np.stack([cos_t, sin_t], axis=1)
    v = np.stack([-sin_t, cos_t], axis=1)
    lu = half_l * u
    wv = half_w * v
    c = centers
    return np.stack([c + lu + wv, c + lu - wv, c - lu - wv, c - lu + wv], axis=1)


def obb_hits_circle(centers, cos_t, sin_t, half_l, half_w, obstacle: CircleObstacle,
                    shrink: float = 0.0) -> np.ndarray:
    reff = obstacle.radius - shrink
    if reff < 0:
        return np.zeros(len(centers), dtype=bool)
    d = obstacle.center - centers
    lx = d[:, 0] * cos_t + d[:, 1] * sin_t
    ly = -d[:, 0] * sin_t + d[:, 1] * cos_t
    qx = np.clip(lx, -half_l, half_l)
    qy = np.clip(ly, -half_w, half_w)
    d2 = (lx - qx) ** 2 + (ly - qy) ** 2
    return d2 <= reff * reff


def obb_hits_polygon(centers, cos_t, sin_t, half_l, half_w, poly: ConvexPolygon,
                     shrink: float = 0.0) -> np.ndarray:
    """Separating-axis test; touching counts as a hit."""
    return _FusedPolygons([poly]).hits_obb(centers, cos_t, sin_t, half_l, half_w, shrink)


class _FusedPolygons:
    """All convex polygon obstacles stacked so one oriented-rectangle query
    is a handful of array ops instead of a python loop over obstacles."""

    def __init__(self, polys):
        self.normals = np.concatenate([p.normals for p in polys])
        self.self_min = np.concatenate([p._self_min for p in polys])
        self.self_max = np.concatenate([p._self_max for p in polys])
        self.verts = np.concatenate([p.vertices for p in polys])
        counts_n = [len(p.normals) for p in polys]
        counts_v = [len(p.vertices) for p in polys]
        self.normal_starts = np.cumsum([0] + counts_n[:-1])
        self.vert_starts = np.cumsum([0] + counts_v[:-1])

    def hits_obb(self, centers, cos_t, sin_t, half_l, half_w, shrink: float = 0.0) -> np.ndarray:
        half_l = np.asarray(half_l, dtype=float)
        half_w = np.asarray(half_w, dtype=float)
        if half_l.ndim == 1:
            half_l = half_l[:, None]
        if half_w.ndim == 1:
            half_w = half_w[:, None]
        nx, ny = self.normals[:, 0], self.normals[:, 1]
        # rectangle extent along each polygon normal, no corners materialized;
        # eroding the polygon lowers its support uniformly, hence the slack
        cn = centers @ self.normals.T
        un = cos_t[:, None] * nx + sin_t[:, None] * ny
        vn = cos_t[:, None] * ny - sin_t[:, None] * nx
        ext = half_l * np.abs(un) + half_w * np.abs(vn)
        sep = (cn + ext < self.self_min + shrink) | (cn - ext > self.self_max - shrink)
        sep_poly = np.logical_or.reduceat(sep, self.normal_starts, axis=1)
        # polygon extent along the rectangle's own two axes
        wx, wy = self.verts[:, 0], self.verts[:, 1]
        pu = wx[None, :] * cos_t[:, None] + wy[None, :] * sin_t[:, None]
        pv = wy[None, :] * cos_t[:, None] - wx[None, :] * sin_t[:, None]
        cu = centers[:, 0] * cos_t + centers[:, 1] * sin_t
        cv = centers[:, 1] * cos_t - centers[:, 0] * sin_t
        for proj, c, half in ((pu, cu, half_l), (pv, cv, half_w)):
            pmin = np.minimum.reduceat(proj, self.vert_starts, axis=1)
            pmax = np.maximum.reduceat(proj, self.vert_starts, axis=1)
            sep_poly |= (c[:, None] + half < pmin + shrink) | (c[:, None] - half > pmax - shrink)
        if shrink > 0.0:
            # a polygon thinner than twice the margin erodes away entirely
            widths = self.self_max - self.self_min
            gone = np.logical_or.reduceat(widths < 2.0 * shrink, self.normal_starts)
            sep_poly |= gone[None, :]
        return ~sep_poly.all(axis=1) if sep_poly.shape[1] > 1 else ~sep_poly[:, 0]


# ---------------------------------------------------------------------------
# robot bodies
# ---------------------------------------------------------------------------


class PointRobot:
    """Dimensionless robot at planar position (x, y)."""

    dim = 2
    config_dim = 2

    def collision_mask(self, obstacles, configs: np.ndarray, shrink: float = 0.0) -> np.ndarray:
        hit = np.zeros(len(configs), dtype=bool)
        for ob in obstacles:
            hit |= ob.hits_disk(configs, 0.0, shrink)
        return hit

    def footprint(self, config) -> list:
        return [{"type": "circle", "center": [float(config[0]), float(config[1])], "radius": 0.0}]

    def to_dict(self) -> dict:
        return {"type": "point"}


class DiskRobot:
    """Disk robot at planar position (x, y)."""

    dim = 2
    config_dim = 2

    def __init__(self, radius: float):
        if radius <= 0:
            raise ValueError("disk robot radius must be positive")
        self.radius = float(radius)

    def collision_mask(self, obstacles, configs: np.ndarray, shrink: float = 0.0) -> np.ndarray:
        hit = np.zeros(len(configs), dtype=bool)
        for ob in obstacles:
            hit |= ob.hits_disk(configs, self.radius, shrink)
        return hit

    def footprint(self, config) -> list:
        return [{"type": "circle", "center": [float(config[0]), float(config[1])], "radius": self.radius}]

    def to_dict(self) -> dict:
        return {"type": "disk", "radius": float(self.radius)}


class RectangleRobot:
    """Oriented rectangle at configuration (x, y, heading).

    `length` runs along the heading, `width` across it.
    """

    dim = 2
    config_dim = 3

    def __init__(self, width: float, length: float):
        if width <= 0 or length <= 0:
            raise ValueError("rectangle sides must be positive")
        self.width = float(width)
        self.length = float(length)
        self._fused_key = None
        self._fused = None

    def _split(self, obstacles):
        # collision_mask is the hot path; fuse the polygons once per world
        if self._fused_key != id(obstacles):
            polys = [ob for ob in obstacles if isinstance(ob, ConvexPolygon)]
            circles = [ob for ob in obstacles if isinstance(ob, CircleObstacle)]
            self._fused = (_FusedPolygons(polys) if polys else None, circles)
            self._fused_key = id(obstacles)
        return self._fused

    def collision_mask(self, obstacles, configs: np.ndarray, shrink: float = 0.0) -> np.ndarray:
        centers = configs[:, :2]
        cos_t = np.cos(configs[:, 2])
        sin_t = np.sin(configs[:, 2])
        hl, hw = self.length / 2.0, self.width / 2.0
        fused, circles = self._split(obstacles)
        hit = np.zeros(len(configs), dtype=bool)
        if fused is not None:
            hit |= fused.hits_obb(centers, cos_t, sin_t, hl, hw, shrink)
        for ob in circles:
            hit |= obb_hits_circle(centers, cos_t, sin_t, hl, hw, ob, shrink)
        return hit

    def footprint(self, config) -> list:
        c = np.asarray(config, dtype=float)
        corners = obb_corners(
            c[None, :2], np.cos(c[2:3]), np.sin(c[2:3]), self.length / 2.0, self.width / 2.0
        )[0]
        return [{"type": "polygon", "points": [list(p) for p in corners]}]

    def to_dict(self) -> dict:
        return {"type": "rectangle", "width": float(self.width), "length": float(self.length)}


class ArmRobot:
    """Planar serial arm with a fixed base.

    The first joint angle is absolute, the rest are relative to the previous
    link. Each link is an oriented rectangle spanning its two joints; link
    pairs of the same arm are never tested against each other.
    """

    dim = 2

    def __init__(self, lengths, widths, base=(0.0, 0.0)):
        self.lengths = np.asarray(lengths, dtype=float)
        self.widths = np.asarray(widths, dtype=float)
        if len(self.lengths) != len(self.widths) or len(self.lengths) == 0:
            raise ValueError("need one width per link")
        if np.any(self.lengths <= 0) or np.any(self.widths <= 0):
            raise ValueError("link dimensions must be positive")
        self.base = np.asarray(base, dtype=float).reshape(2)
        self._fused_key = None
        self._fused = None

    @property
    def config_dim(self) -> int:
        return len(self.lengths)

    def _link_frames(self, configs: np.ndarray):
        """Per-link centers and heading cos/sin for a batch of joint vectors."""
        angles = np.cumsum(configs, axis=1)
        cos_a = np.cos(angles)
        sin_a = np.sin(angles)
        joints = np.empty((len(configs), len(self.lengths) + 1, 2))
        joints[:, 0] = self.base
        for i, li in enumerate(self.lengths):
            joints[:, i + 1, 0] = joints[:, i, 0] + li * cos_a[:, i]
            joints[:, i + 1, 1] = joints[:, i, 1] + li * sin_a[:, i]
        centers = 0.5 * (joints[:, :-1] + joints[:, 1:])
        return joints, centers, cos_a, sin_a

    def _split(self, obstacles):
        if self._fused_key != id(obstacles):
            polys = [ob for ob in obstacles if isinstance(ob, ConvexPolygon)]
            circles = [ob for ob in obstacles if isinstance(ob, CircleObstacle)]
            self._fused = (_FusedPolygons(polys) if polys else None, circles)
            self._fused_key = id(obstacles)
        return self._fused

    def collision_mask(self, obstacles, configs: np.ndarray, shrink: float = 0.0) -> np.ndarray:
        # all links of all configs go through each obstacle test in one call
        n, nl = len(configs), len(self.lengths)
        _, centers, cos_a, sin_a = self._link_frames(configs)
        fused, circles = self._split(obstacles)
        cen = centers.reshape(n * nl, 2)
        cos_f = cos_a.reshape(n * nl)
        sin_f = sin_a.reshape(n * nl)
        half_l = np.broadcast_to(self.lengths / 2.0, (n, nl)).reshape(n * nl)
        half_w = np.broadcast_to(self.widths / 2.0, (n, nl)).reshape(n * nl)
        hit = np.zeros(n * nl, dtype=bool)
        if fused is not None:
            hit |= fused.hits_obb(cen, cos_f, sin_f, half_l, half_w, shrink)
        for ob in circles:
            hit |= obb_hits_circle(cen, cos_f, sin_f, half_l, half_w, ob, shrink)
        return hit.reshape(n, nl).any(axis=1)

    def footprint(self, config) -> list:
        c = np.asarray(config, dtype=float)[None, :]
        _, centers, cos_a, sin_a = self._link_frames(c)
        shapes = []
        for i, (li, wi) in enumerate(zip(self.lengths, self.widths)):
            corners = obb_corners(centers[:, i], cos_a[:, i], sin_a[:, i], li / 2.0, wi / 2.0)[0]
            shapes.append({"type": "polygon", "points": [list(p) for p in corners]})
        return shapes

    def to_dict(self) -> dict:
        return {
            "type": "arm",
            "lengths": [float(v) for v in self.lengths],
            "widths": [float(v) for v in self.widths],
            "base": [float(v) for v in self.base],
        }


class BallRobot:
    """Ball robot at spatial position (x, y, z)."""

    dim = 3
    config_dim = 3

    def __init__(self, radius: float):
        if radius <= 0:
            raise ValueError("ball robot radius must be positive")
        self.radius = float(radius)

    def collision_mask(self, obstacles, configs: np.ndarray, shrink: float = 0.0) -> np.ndarray:
        hit = np.zeros(len(configs), dtype=bool)
        for ob in obstacles:
            hit |= ob.hits_ball(configs, self.radius, shrink)
        return hit

    def footprint(self, config) -> list:
        return [{"type": "circle", "center": [float(config[0]), float(config[1])], "radius": self.radius}]

    def to_dict(self) -> dict:
        return {"type": "ball", "radius": float(self.radius)}


class World:
    """A static workspace: a dimension tag plus a list of obstacles."""

    def __init__(self, dim: int, obstacles=()):
        if dim not in (2, 3):
            raise ValueError("world dimension must be 2 or 3")
        self.dim = dim
        self.obstacles = list(obstacles)
        for ob in self.obstacles:
            if ob.dim != dim:
                raise ValueError("obstacle dimension does not match world")

    def to_dict(self) -> dict:
        return {"dim": self.dim, "obstacles": [ob.to_dict() for ob in self.obstacles]}


OBSTACLE_KINDS = {
    "circle": CircleObstacle,
    "polygon": ConvexPolygon,
    "box": Box,
    "sphere": SphereObstacle,
}

ROBOT_KINDS = {
    "point": PointRobot,
    "disk": DiskRobot,
    "rectangle": RectangleRobot,
    "arm": ArmRobot,
    "ball": BallRobot,
}
