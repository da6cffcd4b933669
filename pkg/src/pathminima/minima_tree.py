"""The local-minima tree.

The root is an empty placeholder at level -1. Expanding a node grows that
node's cached roadmap one level up (biased toward the node's own path),
enumerates candidate paths from the sparse graph, optimizes each, and keeps
those that project onto the parent and are not deformable onto an already
known sibling. Children are stored in ascending cost order. A non-root node
that stays childless through repeated expansions is marked spurious: its
path is a minimum of the simplified problem with no counterpart one level
up.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field, fields, replace

import numpy as np

from .bundle import FiberBundleChain
from .cspace import Path, wrap_angle
from .equivalence import VisibilityParams, is_visible, minima_exists, projection_equivalent
from .optimize import OptimizerParams, optimize
from .roadmap import Graph, GrowthParams, Roadmap, dijkstra, dijkstra_tree, growth_params_for

log = logging.getLogger(__name__)

STATUS_UNEXPANDED = "unexpanded"
STATUS_EXPANDED = "expanded"
STATUS_SPURIOUS = "spurious"

TREE_FORMAT = "pathminima-tree"
TREE_VERSION = 1


@dataclass
class ExplorerParams:
    """Everything an exploration session needs, in one serializable bag.

    Radii are stated as dimension-free fractions and converted per level:
    epsilon_frac scales the bias neighborhood, delta_s is the fraction of
    the space measure one sparse vertex is expected to cover.
    """

    n_minima: int = 7
    budget_iterations: int = 5000
    budget_seconds: float | None = None
    delta_s: float = 0.1
    epsilon_frac: float = 0.1
    stretch: float = 3.0
    n_rungs: int = 20
    max_rungs: int = 160
    shortcut_rounds: int = 50
    vertex_reduction_passes: int = 1
    convergence_tol: float = 0.01
    spurious_attempts: int = 3
    enum_beta: float = 3.0
    enum_path_cap: int = 10000
    h: float | None = None
    seed: int = 0

    def __post_init__(self):
        if self.n_minima < 1:
            raise ValueError("n_minima must be >= 1")
        if not 0.0 < self.delta_s < 1.0:
            raise ValueError("delta_s must be in (0, 1)")
        if self.epsilon_frac <= 0.0:
            raise ValueError("epsilon_frac must be positive")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        if self.budget_iterations is not None and self.budget_iterations < 0:
            raise ValueError("budget_iterations must be >= 0")
        if self.spurious_attempts < 1:
            raise ValueError("spurious_attempts must be >= 1")

    def optimizer(self) -> OptimizerParams:
        return OptimizerParams(
            shortcut_rounds=self.shortcut_rounds,
            vertex_reduction_passes=self.vertex_reduction_passes,
            convergence_tol=self.convergence_tol,
            h=self.h,
            seed=self.seed,
        )

    def visibility(self) -> VisibilityParams:
        return VisibilityParams(n_rungs=self.n_rungs, max_rungs=self.max_rungs, h=self.h)

    def to_dict(self) -> dict:
        out = {}
        for f in fields(self):
            out[f.name] = getattr(self, f.name)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "ExplorerParams":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown params: {sorted(unknown)}")
        return cls(**data)

    def merged(self, overrides: dict | None) -> "ExplorerParams":
        if not overrides:
            return replace(self)
        known = {f.name for f in fields(self)}
        unknown = set(overrides) - known
        if unknown:
            raise ValueError(f"unknown params: {sorted(unknown)}")
        return replace(self, **overrides)


def enumerate_paths(
    graph: Graph,
    start: int,
    goal: int,
    m: int,
    *,
    level: int = 0,
    beta: float | None = None,
    select_radius: float | None = None,
    path_cap: int = 10000,
    push_cap: int = 1_000_000,
) -> list[Path]:
    """Up to m simple start-goal paths from a graph, cheapest first.

    Plain depth-first enumeration with neighbors in ascending edge-length
    order. With beta set, partial paths that cannot finish under beta times
    the shortest cost are pruned; with select_radius set, the returned m are
    chosen greedily for spatial spread (matched-parameter distance above the
    radius) before falling back to cost order, so near-duplicates of the
    cheapest route do not crowd out distinct routes.
    """
    if not (0 <= start < graph.n) or not (0 <= goal < graph.n):
        raise ValueError("start or goal vertex missing from graph")
    if m < 1 or start == goal:
        return []
    dist_goal, par_goal = dijkstra_tree(graph, goal)
    if not np.isfinite(dist_goal[start]):
        return []
    bound = beta * float(dist_goal[start]) + 1e-9 if beta is not None else np.inf
    plain = beta is None and select_radius is None
    nbrs = [sorted(graph.adj[i].items(), key=lambda kv: (kv[1], kv[0])) for i in range(graph.n)]

    found: list[tuple[float, list[int]]] = []
    on_path = {start}
    route = [start]
    costs = [0.0]
    iters = [iter(nbrs[start])]
    pushes = 0
    full = False
    while iters and not full:
        descended = False
        for v, w in iters[-1]:
            g = costs[-1] + w
            if v == goal:
                found.append((g, route + [goal]))
                if len(found) >= path_cap or (plain and len(found) >= m):
                    full = True
                    break
                continue
            if v in on_path or g + dist_goal[v] > bound:
                continue
            pushes += 1
            if pushes > push_cap:
                full = True
                break
            on_path.add(v)
            route.append(v)
            costs.append(g)
            iters.append(iter(nbrs[v]))
            descended = True
            break
        if not descended or full:
            iters.pop()
            costs.pop()
            on_path.discard(route.pop())
            if full:
                break

    if not plain:
        found = _augment_via_edges(graph, start, goal, found, bound, dist_goal, par_goal)

    order = sorted(range(len(found)), key=lambda i: (found[i][0], found[i][1]))
    if select_radius is not None and len(found) > m:
        picked = _spread_selection(graph, found, order, m, select_radius)
    else:
        picked = order[:m]
    return [Path(graph.coords[found[i][1]], graph.space, level=level) for i in picked]


def _augment_via_edges(graph, start, goal, found, bound, dist_goal, par_goal):
    """Cheapest simple route through every edge, merged into the pool.

    Depth-first enumeration can burn its whole cap inside one corridor of a
    dense graph; routing the shortest-path trees through each edge costs two
    Dijkstra runs and guarantees every corridor contributes its best
    representative."""
    dist_start, par_start = dijkstra_tree(graph, start)
    seen = {tuple(v) for _, v in found}
    out = list(found)
    for u in range(graph.n):
        du = dist_start[u]
        if not np.isfinite(du):
            continue
        for v, w in graph.adj[u].items():
            c = du + w + dist_goal[v]
            if not np.isfinite(c) or c > bound:
                continue
            left = [u]
            while left[-1] != start:
                left.append(int(par_start[left[-1]]))
            left.reverse()
            right = [v]
            while right[-1] != goal:
                right.append(int(par_goal[right[-1]]))
            verts = left + right
            if len(set(verts)) != len(verts):
                continue
            key = tuple(verts)
            if key in seen:
                continue
            seen.add(key)
            out.append((float(c), verts))
    return out


_SPREAD_SAMPLES = 16
_SPREAD_POOL = 1024


def _spread_selection(graph: Graph, found, order, m: int, radius: float) -> list[int]:
    space = graph.space
    # Spreading only ever needs the cheap end of the candidate list; capping
    # the pool keeps the resampling cost independent of the enumeration cap.
    order = order[:_SPREAD_POOL]
    ts = np.linspace(0.0, 1.0, _SPREAD_SAMPLES)
    reps = np.stack([Path(graph.coords[found[i][1]], space).eval_many(ts) for i in order])
    weights = space.weights
    ci = space.circle_idx
    min_dist = np.full(len(order), np.inf)
    chosen: list[int] = []
    taken = np.zeros(len(order), dtype=bool)
    while len(chosen) < m:
        pick = -1
        for i in range(len(order)):
            if not taken[i] and min_dist[i] > radius:
                pick = i
                break
        if pick < 0:
            break
        chosen.append(pick)
        taken[pick] = True
        diff = reps - reps[pick][None]
        if len(ci):
            diff[..., ci] = wrap_angle(diff[..., ci])
        d = np.sqrt(((diff * weights) ** 2).sum(axis=2)).max(axis=1)
        min_dist = np.minimum(min_dist, d)
    for i in range(len(order)):
        if len(chosen) >= m:
            break
        if not taken[i]:
            chosen.append(i)
            taken[i] = True
    return [order[i] for i in sorted(chosen)]


@dataclass
class MinimaNode:
    id: int
    level: int
    path: Path | None
    parent: int | None
    children: list[int] = field(default_factory=list)
    status: str = STATUS_UNEXPANDED
    attempts: int = 0

    @property
    def cost(self) -> float:
        return 0.0 if self.path is None else float(self.path.length)


class MinimaTree:
    """Tree of local minima across the bundle levels, root at level -1."""

    def __init__(self, chain: FiberBundleChain, start, goal, params: ExplorerParams,
                 scenario_hash: str = ""):
        self.chain = chain
        self.params = params
        full = chain.space(chain.K).space
        self.start = full.normalize(np.asarray(start, dtype=float))
        self.goal = full.normalize(np.asarray(goal, dtype=float))
        if self.start.shape != (full.dim,) or self.goal.shape != (full.dim,):
            raise ValueError("start/goal must be full-space configurations")
        self.scenario_hash = scenario_hash
        self.nodes: dict[int, MinimaNode] = {0: MinimaNode(0, -1, None, None)}
        self.root_id = 0
        self._next_id = 1
        self.roadmaps: dict[int, Roadmap] = {}
        self._rngs: dict[int, np.random.Generator] = {}

    @property
    def seed(self) -> int:
        return self.params.seed

    def node_rng(self, node_id: int) -> np.random.Generator:
        got = self._rngs.get(node_id)
        if got is None:
            got = np.random.default_rng(np.random.SeedSequence([self.params.seed, node_id]))
            self._rngs[node_id] = got
        return got

    def level_counts(self) -> dict[int, int]:
        counts: dict[int, int] = {}
        for n in self.nodes.values():
            counts[n.level] = counts.get(n.level, 0) + 1
        return dict(sorted(counts.items()))

    def nodes_at_level(self, level: int) -> list[int]:
        return sorted(n.id for n in self.nodes.values() if n.level == level)

    def expand(self, node_id: int, iterations: int | None = None, seconds: float | None = None,
               on_progress=None) -> list[int]:
        """Grow, enumerate, optimize, filter, commit. Returns new child ids."""
        node = self.nodes.get(node_id)
        if node is None:
            raise ValueError(f"no node {node_id}")
        if node.level >= self.chain.K:
            raise ValueError("leaf level: nodes at the last level cannot be expanded")
        p = self.params
        child_level = node.level + 1
        ps = self.chain.space(child_level)
        rng = self.node_rng(node_id)

        rm = self.roadmaps.get(node_id)
        if rm is None:
            base_space = self.chain.space(node.level).space if node.level >= 0 else None
            gp = growth_params_for(ps, p.delta_s, p.epsilon_frac, p.stretch, p.h, base_space=base_space)
            start = self.chain.project_config_to(self.start, self.chain.K, child_level)
            goal = self.chain.project_config_to(self.goal, self.chain.K, child_level)
            rm = Roadmap(self.chain, child_level, node.path, start, goal, gp, rng=rng)
            self.roadmaps[node_id] = rm

        if iterations is None and seconds is None:
            iterations = p.budget_iterations
            seconds = p.budget_seconds
        progress = None
        if on_progress is not None:
            progress = lambda n: on_progress("iterations", n)
        rm.grow_until(iterations=iterations, seconds=seconds, progress=progress)

        cands = enumerate_paths(
            rm.sparse, rm.start_id, rm.goal_id, 2 * p.n_minima,
            level=child_level, beta=p.enum_beta, select_radius=rm.params.delta,
            path_cap=p.enum_path_cap,
        )
        existing = [self.nodes[c].path for c in node.children]
        opt_params = p.optimizer()
        vis_params = p.visibility()
        accepted: list[Path] = []
        for cand in cands:
            if len(existing) + len(accepted) >= p.n_minima:
                break
            try:
                best = optimize(cand, ps, opt_params, rng)
            except ValueError:
                continue
            if not projection_equivalent(self.chain, best, node.path, opt_params, vis_params, rng):
                continue
            if minima_exists(best, existing + accepted, ps, vis_params):
                continue
            accepted.append(best)
            if on_progress is not None:
                on_progress("candidates", len(accepted))

        new_ids = []
        for q in accepted:
            nid = self._next_id
            self._next_id += 1
            self.nodes[nid] = MinimaNode(nid, child_level, q, node_id)
            node.children.append(nid)
            new_ids.append(nid)
        node.children.sort(key=lambda cid: (self.nodes[cid].cost, cid))
        node.attempts += 1
        node.status = STATUS_EXPANDED
        if not node.children and node.parent is not None and node.attempts >= p.spurious_attempts:
            self.mark_spurious(node_id)
        return new_ids

    def mark_spurious(self, node_id: int) -> bool:
        """Flag a repeatedly barren non-root node. No-op when the
        preconditions do not hold."""
        node = self.nodes.get(node_id)
        if node is None:
            raise ValueError(f"no node {node_id}")
        if (node.parent is None or node.children or node.status == STATUS_UNEXPANDED
                or node.level >= self.chain.K or node.attempts < self.params.spurious_attempts):
            log.warning("node %d does not qualify as spurious", node_id)
            return False
        node.status = STATUS_SPURIOUS
        return True

    def serialize(self) -> str:
        nodes = []
        for nid in sorted(self.nodes):
            n = self.nodes[nid]
            nodes.append({
                "id": n.id,
                "level": n.level,
                "parent": n.parent,
                "status": n.status,
                "attempts": n.attempts,
                "cost": float(n.cost),
                "waypoints": None if n.path is None else [[float(v) for v in row] for row in n.path.waypoints],
            })
        doc = {
            "format": TREE_FORMAT,
            "version": TREE_VERSION,
            "scenario": self.scenario_hash,
            "start": [float(v) for v in self.start],
            "goal": [float(v) for v in self.goal],
            "params": self.params.to_dict(),
            "nodes": nodes,
        }
        return json.dumps(doc, sort_keys=True, indent=1) + "\n"

    @classmethod
    def deserialize(cls, text: str, chain: FiberBundleChain) -> "MinimaTree":
        doc = json.loads(text)
        if doc.get("format") != TREE_FORMAT:
            raise ValueError("not a minima tree document")
        if doc.get("version") != TREE_VERSION:
            raise ValueError(f"unsupported tree version {doc.get('version')!r}")
        params = ExplorerParams.from_dict(doc["params"])
        tree = cls(chain, doc["start"], doc["goal"], params, scenario_hash=doc.get("scenario", ""))
        tree.nodes.clear()
        for rec in doc["nodes"]:
            path = None
            if rec["waypoints"] is not None:
                space = chain.space(rec["level"]).space
                path = Path(np.asarray(rec["waypoints"], dtype=float), space, level=rec["level"])
            tree.nodes[rec["id"]] = MinimaNode(
                id=rec["id"], level=rec["level"], path=path, parent=rec["parent"],
                status=rec["status"], attempts=rec["attempts"],
            )
        if 0 not in tree.nodes or tree.nodes[0].level != -1:
            raise ValueError("tree document lacks a root node")
        for n in tree.nodes.values():
            if n.parent is not None:
                if n.parent not in tree.nodes:
                    raise ValueError(f"node {n.id} references missing parent {n.parent}")
                tree.nodes[n.parent].children.append(n.id)
        for n in tree.nodes.values():
            n.children.sort(key=lambda cid: (tree.nodes[cid].cost, cid))
        tree._next_id = max(tree.nodes) + 1
        return tree
