"""Incremental roadmap with a dense tree and a sparse spanner layered on
top of it.

Every grown configuration extends the dense graph RRT-style. It is added to
the sparse graph only when it serves coverage (no visible sparse vertex
within delta), connectivity (bridges two sparse components), or a useful
cycle (the sparse graph detours more than a stretch factor compared to
routing through the new vertex). Inserted vertices get edges to every
visible sparse vertex within twice delta, which keeps the sparse graph a
subsampled view of the same free space rather than a separate planner.
"""

from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .cspace import TWO_PI, PlanningSpace, SpaceDescriptor


def visibility_radius(space: SpaceDescriptor, fraction: float) -> float:
    """Radius of a metric ball covering the given fraction of the space
    measure, so the sparse-graph density is stated as a fraction of free
    space per vertex instead of an absolute length."""
    d = space.dim
    unit_ball = math.pi ** (d / 2.0) / math.gamma(d / 2.0 + 1.0)
    return float((fraction * space.measure / unit_ball) ** (1.0 / d))


def step_radius(space: SpaceDescriptor, fraction: float = 0.2) -> float:
    return float(fraction * space.measure ** (1.0 / space.dim))


@dataclass
class GrowthParams:
    epsilon: float
    delta: float
    max_step: float
    h: float
    stretch: float = 3.0
    sample_attempts: int = 100
    seed: int = 0

    def __post_init__(self):
        if self.epsilon < 0 or self.delta <= 0 or self.max_step <= 0 or self.h <= 0:
            raise ValueError("growth radii and resolution must be positive")
        if self.stretch <= 1.0:
            raise ValueError("stretch must be > 1")


def growth_params_for(ps: PlanningSpace, delta_s: float, eps_frac: float, stretch: float,
                      h: float | None, base_space: SpaceDescriptor | None = None) -> GrowthParams:
    """Convert fraction-style tuning knobs into absolute radii for one
    level. The bias ball lives on the base space (where the parent path is),
    so epsilon uses the base measure when one is given."""
    space = ps.space
    eps_space = base_space if base_space is not None else space
    return GrowthParams(
        epsilon=float(eps_frac * eps_space.measure ** (1.0 / eps_space.dim)),
        delta=visibility_radius(space, delta_s),
        max_step=step_radius(space),
        h=float(h) if h is not None else ps.default_h,
        stretch=float(stretch),
    )


class _UnionFind:
    def __init__(self):
        self.parent: list[int] = []

    def add(self) -> int:
        self.parent.append(len(self.parent))
        return len(self.parent) - 1

    def find(self, i: int) -> int:
        root = i
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[i] != root:
            self.parent[i], i = root, self.parent[i]
        return root

    def union(self, i: int, j: int):
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            self.parent[max(ri, rj)] = min(ri, rj)


class Graph:
    """Vertex coordinates in a growing array plus adjacency dicts mapping
    neighbor id to edge length."""

    def __init__(self, space: SpaceDescriptor, cap: int = 1024, index: bool = False):
        self.space = space
        self._coords = np.empty((cap, space.dim))
        self.n = 0
        self.adj: list[dict[int, float]] = []
        # Optional nearest-vertex index: a KD-tree over metric-scaled
        # coordinates (circle factors become periodic box dimensions),
        # rebuilt lazily with a linear scan over the unindexed tail.
        self._index_on = index
        self._kd = None
        self._kd_n = 0
        if index:
            w = space.weights
            self._kd_shift = space.lows.copy()
            self._kd_scale = w.copy()
            box = space.extents * w * 4.0 + 1.0
            box[space.circle_idx] = TWO_PI * w[space.circle_idx]
            self._kd_box = box
            self._scaled = np.empty_like(self._coords)

    def _scale_rows(self, X: np.ndarray) -> np.ndarray:
        z = (X - self._kd_shift) * self._kd_scale
        for i in self.space.circle_idx:
            z[..., i] = np.mod(z[..., i], self._kd_box[i])
        return z

    @property
    def coords(self) -> np.ndarray:
        return self._coords[: self.n]

    def add_vertex(self, x: np.ndarray) -> int:
        if self.n == len(self._coords):
            grown = np.empty((2 * len(self._coords), self._coords.shape[1]))
            grown[: self.n] = self._coords[: self.n]
            self._coords = grown
            if self._index_on:
                scaled = np.empty_like(grown)
                scaled[: self.n] = self._scaled[: self.n]
                self._scaled = scaled
        self._coords[self.n] = x
        if self._index_on:
            self._scaled[self.n] = self._scale_rows(np.asarray(x, dtype=float))
        self.adj.append({})
        self.n += 1
        return self.n - 1

    def add_edge(self, i: int, j: int, length: float | None = None):
        if length is None:
            length = float(self.space.distance(self._coords[i], self._coords[j]))
        self.adj[i][j] = length
        self.adj[j][i] = length

    def nearest(self, x: np.ndarray) -> int:
        if not self._index_on or self.n < 256:
            return int(np.argmin(self.space.distance_many(self.coords, x)))
        if self._kd is None or self.n - self._kd_n >= 512:
            self._kd = cKDTree(self._scaled[: self.n], boxsize=self._kd_box)
            self._kd_n = self.n
        _, best = self._kd.query(self._scale_rows(np.asarray(x, dtype=float)))
        best = int(best)
        if self._kd_n < self.n:
            # compare tree winner and tail winner under the exact metric;
            # the lower id wins ties, and prefix ids are always lower
            bd = float(self.space.distance(self._coords[best], x))
            tail = self.space.distance_many(self._coords[self._kd_n: self.n], x)
            j = int(np.argmin(tail))
            if tail[j] < bd:
                best = self._kd_n + j
        return best

    def within(self, x: np.ndarray, radius: float) -> tuple[np.ndarray, np.ndarray]:
        d = self.space.distance_many(self.coords, x)
        ids = np.nonzero(d <= radius)[0]
        order = np.lexsort((ids, d[ids]))
        return ids[order], d[ids][order]

    @property
    def n_edges(self) -> int:
        return sum(len(a) for a in self.adj) // 2


def dijkstra(graph: Graph, source: int, targets: set[int] | None = None) -> np.ndarray:
    """Shortest path lengths from source to every vertex (inf when
    unreachable). Stops early once all requested targets are settled."""
    dist = np.full(graph.n, np.inf)
    dist[source] = 0.0
    todo = set(targets) if targets is not None else None
    heap = [(0.0, source)]
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist[u]:
            continue
        if todo is not None:
            todo.discard(u)
            if not todo:
                break
        for v, w in graph.adj[u].items():
            nd = d + w
            if nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def dijkstra_tree(graph: Graph, source: int) -> tuple[np.ndarray, np.ndarray]:
    """Shortest path lengths plus the predecessor of every settled vertex
    (source and unreachable vertices get -1)."""
    dist = np.full(graph.n, np.inf)
    parent = np.full(graph.n, -1, dtype=int)
    dist[source] = 0.0
    heap = [(0.0, source)]
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist[u]:
            continue
        for v, w in graph.adj[u].items():
            nd = d + w
            if nd < dist[v]:
                dist[v] = nd
                parent[v] = u
                heapq.heappush(heap, (nd, v))
    return dist, parent


@dataclass
class RoadmapStats:
    iterations: int = 0
    samples_rejected: int = 0
    coverage: int = 0
    connectivity: int = 0
    cycle: int = 0
    seconds: float = 0.0

    def as_dict(self) -> dict:
        return {
            "iterations": self.iterations,
            "samples_rejected": self.samples_rejected,
            "inserted": {"coverage": self.coverage, "connectivity": self.connectivity, "cycle": self.cycle},
            "seconds": round(self.seconds, 3),
        }


class Roadmap:
    """Grows the dense/sparse graph pair for one tree node.

    bias_path is the parent minimum one level down; when present, samples
    are drawn near it (uniform along the path, uniform in an epsilon ball
    around the hit point, fiber coordinates uniform) so growth concentrates
    on the part of the space that projects onto the parent.
    """

    def __init__(self, chain, level: int, bias_path, start: np.ndarray, goal: np.ndarray,
                 params: GrowthParams, rng: np.random.Generator | None = None):
        self.chain = chain
        self.level = level
        self.ps: PlanningSpace = chain.space(level)
        self.bias_path = bias_path
        self.params = params
        self.rng = rng if rng is not None else np.random.default_rng(params.seed)
        self.stats = RoadmapStats()
        space = self.ps.space
        if not self.ps.free(start) or not self.ps.free(goal):
            raise ValueError("roadmap endpoints must be collision free")
        self.dense = Graph(space, index=True)
        self.sparse = Graph(space, cap=256)
        self._uf = _UnionFind()
        self._pool = np.empty((0, space.dim))
        self._pool_at = 0
        self.start_id = self.dense.add_vertex(space.normalize(start))
        self.goal_id = self.dense.add_vertex(space.normalize(goal))
        for i in (self.start_id, self.goal_id):
            sid = self.sparse.add_vertex(self.dense.coords[i])
            self._uf.add()
            assert sid == i
        d = float(space.distance(self.dense.coords[0], self.dense.coords[1]))
        if d <= 2.0 * params.delta and d > 0.0 and self.ps.segment_free(self.dense.coords[0], self.dense.coords[1], params.h):
            self.sparse.add_edge(0, 1, d)
            self._uf.union(0, 1)
            if d <= params.max_step:
                self.dense.add_edge(0, 1, d)

    def grow_step(self) -> tuple[bool, bool]:
        """One growth iteration: sample (biased when a parent path is set),
        steer from the nearest dense vertex, then try the sparse criteria.
        Returns (added_dense, added_sparse)."""
        self.stats.iterations += 1
        x = self._sample_free()
        if x is None:
            return False, False
        near_id = self.dense.nearest(x)
        near = self.dense.coords[near_id]
        x_new = self._steer(near, x)
        d = float(self.ps.space.distance(near, x_new))
        if d < 1e-12 or not self.ps.segment_free(near, x_new, self.params.h):
            # Extension blocked, but the sample itself is free and may still
            # satisfy a sparse criterion. Without this, a narrow passage the
            # dense tree cannot steer into from outside never acquires
            # guards, and no route through it can ever be enumerated.
            return False, self._add_conditional(x)
        new_id = self.dense.add_vertex(x_new)
        self.dense.add_edge(near_id, new_id, d)
        return True, self._add_conditional(x_new)

    def grow_until(self, iterations: int | None = None, seconds: float | None = None,
                   progress=None, progress_every: int = 200):
        if iterations is None and seconds is None:
            raise ValueError("growth needs an iteration or time budget")
        t0 = time.monotonic()
        done = 0
        while True:
            if iterations is not None and done >= iterations:
                break
            if seconds is not None and time.monotonic() - t0 >= seconds:
                break
            self.grow_step()
            done += 1
            if progress is not None and done % progress_every == 0:
                progress(done)
        self.stats.seconds += time.monotonic() - t0
        if progress is not None:
            progress(done)

    def _sample_free(self) -> np.ndarray | None:
        # The bias distribution is fixed for the lifetime of the roadmap, so
        # free configurations are drawn in large blocks and handed out one at
        # a time; collision checking then runs in a few big batches instead
        # of a small one per growth iteration.
        while self._pool_at >= len(self._pool):
            batch = max(256, self.params.sample_attempts)
            if self.bias_path is None:
                cand = self.ps.space.sample(self.rng, batch)
            else:
                cand = self._sample_near_parent(batch)
            bad = self.ps.phi_batch(cand)
            self.stats.samples_rejected += int(bad.sum())
            if bad.all():
                return None
            self._pool = cand[~bad]
            self._pool_at = 0
        x = self._pool[self._pool_at]
        self._pool_at += 1
        return x

    def _sample_near_parent(self, batch: int) -> np.ndarray:
        base_space = self.bias_path.space
        ts = self.rng.uniform(0.0, 1.0, batch)
        pts = self.bias_path.eval_many(ts)
        direction = self.rng.normal(size=(batch, base_space.dim))
        norms = np.linalg.norm(direction, axis=1, keepdims=True)
        norms[norms == 0.0] = 1.0
        radii = self.params.epsilon * self.rng.uniform(0.0, 1.0, (batch, 1)) ** (1.0 / base_space.dim)
        base = pts + direction / norms * radii
        for i in base_space.circle_idx:
            base[:, i] = np.mod(base[:, i] + np.pi, 2.0 * np.pi) - np.pi
        return self.chain.sample_fiber_many(base, self.level, self.rng)

    def _steer(self, near: np.ndarray, x: np.ndarray) -> np.ndarray:
        d = float(self.ps.space.distance(near, x))
        if d <= self.params.max_step:
            return x
        return self.ps.space.interpolate(near, x, self.params.max_step / d)

    def _add_conditional(self, x: np.ndarray) -> bool:
        p = self.params
        ids, dists = self.sparse.within(x, 2.0 * p.delta)
        near = dists <= p.delta
        visible = np.zeros(len(ids), dtype=bool)
        if near.any():
            visible[near] = self.ps.segments_free_mask(
                np.broadcast_to(x, (int(near.sum()), len(x))), self.sparse.coords[ids[near]], p.h)
        guards = np.nonzero(near & visible)[0]
        reason = None
        if not len(guards):
            reason = "coverage"
        else:
            comps = {self._uf.find(int(ids[i])) for i in guards}
            if len(comps) >= 2:
                reason = "connectivity"
            elif self._useful_cycle([int(ids[i]) for i in guards], x):
                reason = "cycle"
        if reason is None:
            return False
        far = ~near
        if far.any():
            visible[far] = self.ps.segments_free_mask(
                np.broadcast_to(x, (int(far.sum()), len(x))), self.sparse.coords[ids[far]], p.h)
        sid = self.sparse.add_vertex(x)
        self._uf.add()
        for i in np.nonzero(visible)[0]:
            self.sparse.add_edge(sid, int(ids[i]), float(dists[i]))
            self._uf.union(sid, int(ids[i]))
        setattr(self.stats, reason, getattr(self.stats, reason) + 1)
        return True

    def export_text(self) -> str:
        """Debug dump: vertices then edges of both graphs."""
        out = []
        for name, g in (("dense", self.dense), ("sparse", self.sparse)):
            out.append(f"# {name}: {g.n} vertices, {g.n_edges} edges")
            for i in range(g.n):
                coords = " ".join(repr(float(v)) for v in g.coords[i])
                out.append(f"v {i} {coords}")
            for i in range(g.n):
                for j, w in sorted(g.adj[i].items()):
                    if j > i:
                        out.append(f"e {i} {j} {w!r}")
        return "\n".join(out) + "\n"

    def _useful_cycle(self, guards: list[int], x: np.ndarray) -> bool:
        """Inserting x is useful when for some visible pair the sparse graph
        detours more than stretch times the route through x."""
        if len(guards) < 2:
            return False
        through = {g: float(self.ps.space.distance(self.sparse.coords[g], x)) for g in guards}
        for a_pos, u in enumerate(guards[:-1]):
            rest = set(guards[a_pos + 1 :])
            dist = dijkstra(self.sparse, u, targets=rest)
            for w in guards[a_pos + 1 :]:
                if dist[w] > self.params.stretch * (through[u] + through[w]):
                    return True
        return False
