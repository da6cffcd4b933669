"""Scenario documents: worlds, robots, spaces and the projection chain,
loadable from strict YAML.

A scenario lists one planning space per level (innermost first), one robot
per level, a shared obstacle set, the projection between consecutive
levels, and the full-space start/goal. Unknown keys anywhere are errors so
a typo in an obstacle list cannot silently change an experiment.
"""

from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass

import numpy as np
import yaml

from .bundle import DROP_FACTORS, IDENTITY, BundleLevel, FiberBundleChain, check_admissibility
from .cspace import CircleAxis, EuclideanAxis, PlanningSpace, SpaceDescriptor
from .geometry import (
    ArmRobot,
    BallRobot,
    Box,
    CircleObstacle,
    ConvexPolygon,
    DiskRobot,
    PointRobot,
    RectangleRobot,
    SphereObstacle,
    World,
)
from .minima_tree import ExplorerParams

log = logging.getLogger(__name__)

FORMAT_VERSION = 1

BUILTIN_NAMES = (
    "planar_car",
    "planar_manipulator_2dof",
    "ball_sphere_3d",
    "ball_lattice_3d",
    "empty_2d",
)


class ScenarioError(Exception):
    pass


def _require(cond: bool, where: str, msg: str):
    if not cond:
        raise ScenarioError(f"{where}: {msg}")


def _check_keys(d: dict, where: str, required: set, optional: set = frozenset()):
    _require(isinstance(d, dict), where, f"expected a mapping, got {type(d).__name__}")
    missing = required - set(d)
    _require(not missing, where, f"missing keys {sorted(missing)}")
    unknown = set(d) - required - set(optional)
    _require(not unknown, where, f"unknown keys {sorted(unknown)}")


def _floats(value, where: str, n: int | None = None) -> list[float]:
    _require(isinstance(value, (list, tuple)), where, "expected a number list")
    if n is not None:
        _require(len(value) == n, where, f"expected {n} numbers, got {len(value)}")
    out = []
    for v in value:
        _require(isinstance(v, (int, float)) and not isinstance(v, bool), where, f"non-numeric entry {v!r}")
        out.append(float(v))
    return out


def _parse_axis(spec: dict, where: str):
    _require(isinstance(spec, dict) and "kind" in spec, where, "axis needs a 'kind'")
    kind = spec["kind"]
    if kind == "euclidean":
        _check_keys(spec, where, {"kind", "low", "high"}, {"weight"})
        return EuclideanAxis(float(spec["low"]), float(spec["high"]), float(spec.get("weight", 1.0)))
    if kind == "circle":
        _check_keys(spec, where, {"kind"}, {"weight"})
        return CircleAxis(float(spec.get("weight", 1.0)))
    raise ScenarioError(f"{where}: unknown axis kind {kind!r}")


def _axis_dict(axis) -> dict:
    if isinstance(axis, EuclideanAxis):
        out = {"kind": "euclidean", "low": float(axis.low), "high": float(axis.high)}
    else:
        out = {"kind": "circle"}
    if axis.weight != 1.0:
        out["weight"] = float(axis.weight)
    return out


def _built(where: str, ctor, *args):
    # geometry constructors validate their own invariants; surface those
    # failures with the document path attached instead of a bare ValueError
    try:
        return ctor(*args)
    except (ValueError, TypeError) as exc:
        raise ScenarioError(f"{where}: {exc}") from exc


def _parse_obstacle(spec: dict, where: str):
    _require(isinstance(spec, dict) and "type" in spec, where, "obstacle needs a 'type'")
    t = spec["type"]
    if t == "circle":
        _check_keys(spec, where, {"type", "center", "radius"})
        return _built(where, CircleObstacle, _floats(spec["center"], where + ".center", 2), float(spec["radius"]))
    if t == "polygon":
        _check_keys(spec, where, {"type", "points"})
        pts = spec["points"]
        _require(isinstance(pts, list) and len(pts) >= 3, where, "polygon needs >= 3 points")
        return _built(where, ConvexPolygon, [_floats(p, where + ".points", 2) for p in pts])
    if t == "box":
        _check_keys(spec, where, {"type", "lo", "hi"})
        return _built(where, Box, _floats(spec["lo"], where + ".lo", 3), _floats(spec["hi"], where + ".hi", 3))
    if t == "sphere":
        _check_keys(spec, where, {"type", "center", "radius"})
        return _built(where, SphereObstacle, _floats(spec["center"], where + ".center", 3), float(spec["radius"]))
    raise ScenarioError(f"{where}: unknown obstacle type {t!r}")


def _parse_robot(spec: dict, where: str):
    _require(isinstance(spec, dict) and "type" in spec, where, "robot needs a 'type'")
    t = spec["type"]
    if t == "point":
        _check_keys(spec, where, {"type"})
        return PointRobot()
    if t == "disk":
        _check_keys(spec, where, {"type", "radius"})
        return _built(where, DiskRobot, float(spec["radius"]))
    if t == "rectangle":
        _check_keys(spec, where, {"type", "width", "length"})
        return _built(where, RectangleRobot, float(spec["width"]), float(spec["length"]))
    if t == "arm":
        _check_keys(spec, where, {"type", "lengths", "widths"}, {"base"})
        lengths = _floats(spec["lengths"], where + ".lengths")
        widths = _floats(spec["widths"], where + ".widths")
        base = _floats(spec.get("base", [0.0, 0.0]), where + ".base", 2)
        return _built(where, ArmRobot, lengths, widths, base)
    if t == "ball":
        _check_keys(spec, where, {"type", "radius"})
        return _built(where, BallRobot, float(spec["radius"]))
    raise ScenarioError(f"{where}: unknown robot type {t!r}")


@dataclass
class Scenario:
    name: str
    version: int
    spaces: list[SpaceDescriptor]
    world: World
    robots: list
    bundle_specs: list[dict]
    start: np.ndarray
    goal: np.ndarray
    params: ExplorerParams

    @property
    def k_levels(self) -> int:
        return len(self.spaces) - 1

    def build_chain(self) -> FiberBundleChain:
        levels = []
        for i, (space, robot) in enumerate(zip(self.spaces, self.robots)):
            ps = PlanningSpace(space, self.world, robot)
            if i == 0:
                levels.append(BundleLevel(ps))
            else:
                spec = self.bundle_specs[i - 1]
                levels.append(BundleLevel(ps, spec["type"], tuple(spec.get("drop", ()))))
        return FiberBundleChain(levels)

    def to_canonical(self) -> dict:
        doc = {
            "version": self.version,
            "name": self.name,
            "space": [[_axis_dict(a) for a in s.factors] for s in self.spaces],
            "world": [o.to_dict() for o in self.world.obstacles],
            "robot": [r.to_dict() for r in self.robots],
            "bundle": [
                {"type": b["type"], **({"drop": list(b["drop"])} if b.get("drop") else {})}
                for b in self.bundle_specs
            ],
            "problem": {
                "start": [float(v) for v in self.start],
                "goal": [float(v) for v in self.goal],
            },
        }
        params = self.params.to_dict()
        defaults = ExplorerParams().to_dict()
        overrides = {k: v for k, v in params.items() if v != defaults[k]}
        if overrides:
            doc["params"] = overrides
        return doc

    def to_text(self) -> str:
        return yaml.safe_dump(self.to_canonical(), sort_keys=True, default_flow_style=None)

    @property
    def scenario_hash(self) -> str:
        return hashlib.sha256(self.to_text().encode()).hexdigest()[:16]

    def __eq__(self, other) -> bool:
        return isinstance(other, Scenario) and self.to_canonical() == other.to_canonical()


def load_scenario(text: str, check_samples: int = 2000) -> Scenario:
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise ScenarioError(f"not parseable: {e}") from e
    _check_keys(doc, "scenario", {"version", "name", "space", "world", "robot", "bundle", "problem"}, {"params"})
    _require(doc["version"] == FORMAT_VERSION, "version", f"unsupported version {doc['version']!r}")
    name = doc["name"]
    _require(isinstance(name, str) and name, "name", "must be a non-empty string")

    spaces_spec = doc["space"]
    _require(isinstance(spaces_spec, list) and spaces_spec, "space", "need at least one level")
    spaces = []
    for i, level in enumerate(spaces_spec):
        _require(isinstance(level, list) and level, f"space[{i}]", "need at least one axis")
        spaces.append(SpaceDescriptor(tuple(_parse_axis(a, f"space[{i}][{j}]") for j, a in enumerate(level))))

    world_spec = doc["world"]
    _require(isinstance(world_spec, list), "world", "expected an obstacle list")
    dim = 3 if spaces[-1].dim >= 3 and any(
        isinstance(o, dict) and o.get("type") in ("box", "sphere") for o in world_spec
    ) else 2
    obstacles = [_parse_obstacle(o, f"world[{i}]") for i, o in enumerate(world_spec)]
    if obstacles:
        dim = obstacles[0].dim
        _require(all(o.dim == dim for o in obstacles), "world", "mixed 2D/3D obstacles")

    robots_spec = doc["robot"]
    _require(isinstance(robots_spec, list) and len(robots_spec) == len(spaces), "robot",
             f"need one robot per level ({len(spaces)}), got {len(robots_spec) if isinstance(robots_spec, list) else 'non-list'}")
    robots = [_parse_robot(r, f"robot[{i}]") for i, r in enumerate(robots_spec)]
    if not obstacles:
        dim = robots[0].dim
    world = World(dim, tuple(obstacles))

    bundle_spec = doc["bundle"]
    _require(isinstance(bundle_spec, list) and len(bundle_spec) == len(spaces) - 1, "bundle",
             f"need one projection per level pair ({len(spaces) - 1})")
    bundles = []
    for i, b in enumerate(bundle_spec):
        where = f"bundle[{i}]"
        _require(isinstance(b, dict) and "type" in b, where, "projection needs a 'type'")
        if b["type"] == IDENTITY:
            _check_keys(b, where, {"type"})
            bundles.append({"type": IDENTITY})
        elif b["type"] == DROP_FACTORS:
            _check_keys(b, where, {"type", "drop"})
            drop = b["drop"]
            _require(isinstance(drop, list) and drop and all(isinstance(v, int) for v in drop),
                     where, "'drop' must be a non-empty integer list")
            bundles.append({"type": DROP_FACTORS, "drop": tuple(drop)})
        else:
            raise ScenarioError(f"{where}: unknown projection type {b['type']!r}")

    _check_keys(doc["problem"], "problem", {"start", "goal"})
    full_dim = spaces[-1].dim
    start = np.array(_floats(doc["problem"]["start"], "problem.start", full_dim))
    goal = np.array(_floats(doc["problem"]["goal"], "problem.goal", full_dim))

    params = ExplorerParams()
    if "params" in doc:
        try:
            params = params.merged(doc["params"])
        except (ValueError, TypeError) as e:
            raise ScenarioError(f"params: {e}") from e

    scenario = Scenario(name, doc["version"], spaces, world, robots, bundles, start, goal, params)
    chain = scenario.build_chain()

    full = chain.space(chain.K).space
    for label, cfg in (("start", start), ("goal", goal)):
        _require(bool(np.all(full.in_bounds(full.normalize(cfg)[None, :]))), f"problem.{label}",
                 "outside the configuration space bounds")
        for k in range(chain.K + 1):
            ps_k = chain.space(k)
            x_k = chain.project_config_to(full.normalize(cfg), chain.K, k)
            _require(ps_k.free(x_k), f"problem.{label}", f"infeasible at level {k}")

    if check_samples > 0:
        for rep in check_admissibility(chain, n_samples=check_samples, seed=0):
            if not rep.ok:
                log.warning("scenario %s: projection to level below has %d/%d admissibility violations",
                            name, rep.violations, rep.n_samples)
    return scenario


def builtin(name: str, check_samples: int = 2000) -> Scenario:
    if name not in BUILTIN_NAMES:
        raise ScenarioError(f"unknown builtin scenario {name!r}; known: {', '.join(BUILTIN_NAMES)}")
    from importlib import resources

    text = resources.files("pathminima").joinpath(f"scenarios_data/{name}.yaml").read_text()
    return load_scenario(text, check_samples=check_samples)
