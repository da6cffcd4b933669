"""Exploration of path local minima over fiber-bundle projections."""

from .bundle import BundleLevel, FiberBundleChain, check_admissibility
from .cspace import (
    CircleAxis,
    EuclideanAxis,
    Path,
    PlanningSpace,
    SpaceDescriptor,
    path_cost,
    wrap_angle,
)
from .equivalence import VisibilityParams, is_visible, minima_exists, projection_equivalent
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
from .minima_tree import ExplorerParams, MinimaNode, MinimaTree, enumerate_paths
from .optimize import OptimizerParams, is_fixed_point, optimize
from .roadmap import Graph, GrowthParams, Roadmap, dijkstra, growth_params_for, visibility_radius

__version__ = "0.1.0"

__all__ = [
    "ArmRobot",
    "BallRobot",
    "Box",
    "BundleLevel",
    "CircleAxis",
    "CircleObstacle",
    "ConvexPolygon",
    "DiskRobot",
    "EuclideanAxis",
    "ExplorerParams",
    "FiberBundleChain",
    "Graph",
    "GrowthParams",
    "MinimaNode",
    "MinimaTree",
    "OptimizerParams",
    "Path",
    "PlanningSpace",
    "PointRobot",
    "RectangleRobot",
    "Roadmap",
    "SpaceDescriptor",
    "SphereObstacle",
    "VisibilityParams",
    "World",
    "check_admissibility",
    "dijkstra",
    "enumerate_paths",
    "growth_params_for",
    "is_fixed_point",
    "is_visible",
    "minima_exists",
    "optimize",
    "path_cost",
    "projection_equivalent",
    "visibility_radius",
    "wrap_angle",
]
