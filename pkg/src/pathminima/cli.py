"""Command line entry points.

`pathminima batch` grows a minima tree breadth-first to a requested depth and
writes its serialization (optionally one SVG per leaf path). Runs with the
same flags and an iteration budget produce byte-identical output files.
`pathminima serve` hosts the session API for the browser client.
"""

from __future__ import annotations

import argparse
import errno
import math
import re
import sys
from pathlib import Path as FsPath

import numpy as np

from .cspace import EuclideanAxis
from .explorer import densify_path
from .minima_tree import MinimaTree
from .scenarios import ScenarioError, builtin, load_scenario


def parse_budget(text: str) -> tuple[int | None, float | None]:
    """'20000it' -> iterations, '2s' -> seconds, bare integer -> iterations."""
    m = re.fullmatch(r"(\d+(?:\.\d+)?)(it|s)?", text.strip())
    if not m or (m.group(2) != "s" and "." in m.group(1)):
        raise ValueError(f"budget must look like '5000it' or '2s', got {text!r}")
    if m.group(2) == "s":
        return None, float(m.group(1))
    return int(m.group(1)), None


def _load_scenario_arg(arg: str):
    if arg.startswith("builtin:"):
        return builtin(arg[len("builtin:"):])
    path = FsPath(arg)
    if not path.is_file():
        raise ScenarioError(f"scenario file not found: {arg}")
    return load_scenario(path.read_text())


def grow_breadth_first(tree: MinimaTree, depth: int,
                       iterations: int | None, seconds: float | None) -> None:
    """Expand every node level by level, one attempt each, until the tree is
    `depth` levels deep (capped at the last bundle level). Expanding level L
    produces level L+1, so the last wave runs at depth - 2."""
    top = min(depth - 2, tree.chain.K - 1)
    for level in range(-1, top + 1):
        for nid in tree.nodes_at_level(level):
            tree.expand(nid, iterations=iterations, seconds=seconds)


def cli_batch(args: argparse.Namespace) -> int:
    try:
        scenario = _load_scenario_arg(args.scenario)
    except ScenarioError as e:
        print(f"scenario error: {e}", file=sys.stderr)
        return 2
    iterations, seconds = args.budget
    overrides = {"n_minima": args.n, "seed": args.seed}
    if iterations is not None:
        overrides["budget_iterations"] = iterations
        overrides["budget_seconds"] = None
    if seconds is not None:
        overrides["budget_seconds"] = seconds
    params = scenario.params.merged(overrides)
    tree = MinimaTree(scenario.build_chain(), scenario.start, scenario.goal,
                      params, scenario.scenario_hash)
    grow_breadth_first(tree, args.depth, iterations, seconds)

    out = FsPath(args.out)
    out.write_text(tree.serialize())
    if args.emit_svg is not None:
        emit_svgs(tree, scenario, FsPath(args.emit_svg))
    if args.depth > 0 and not tree.nodes_at_level(0):
        print("budget exhausted: no base-level minima found", file=sys.stderr)
        return 3
    return 0


def cli_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(scenario_dir=args.scenario_dir, log_dir=args.log_dir)
    try:
        uvicorn.run(app, host="127.0.0.1", port=args.port, log_level="warning")
    except (SystemExit, OSError) as e:
        code = getattr(e, "errno", None)
        if isinstance(e, OSError) and code not in (errno.EADDRINUSE, errno.EACCES):
            raise
        print(f"cannot bind port {args.port}: {e}", file=sys.stderr)
        return 2
    return 0


# -- SVG rendering -----------------------------------------------------

def _chart_box(space) -> tuple[tuple[float, float, float, float], bool]:
    """Plot window for a node-level space: the workspace window when the
    leading factors are planar Euclidean axes, else a joint-space chart
    (circle factors span [-pi, pi); obstacles are skipped there)."""
    ranges, euclidean = [], True
    for f in space.factors[:2]:
        if isinstance(f, EuclideanAxis):
            ranges.append((f.low, f.high))
        else:
            ranges.append((-math.pi, math.pi))
            euclidean = False
    while len(ranges) < 2:
        ranges.append((-1.0, 1.0))
        euclidean = False
    (x0, x1), (y0, y1) = ranges
    return (x0, y0, x1, y1), euclidean


def _svg_obstacle(ob: dict, tf) -> str:
    if ob["type"] in ("circle", "sphere"):
        cx, cy = tf(ob["center"][0], ob["center"][1])
        r = ob["radius"] * tf.scale
        return f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="{r:.2f}" class="obs"/>'
    if ob["type"] == "polygon":
        pts = " ".join("{:.2f},{:.2f}".format(*tf(x, y)) for x, y in ob["points"])
        return f'<polygon points="{pts}" class="obs"/>'
    lo, hi = ob["lo"], ob["hi"]
    x0, y0 = tf(lo[0], hi[1])
    x1, y1 = tf(hi[0], lo[1])
    return (f'<rect x="{x0:.2f}" y="{y0:.2f}" width="{x1 - x0:.2f}" '
            f'height="{y1 - y0:.2f}" class="obs"/>')


class _Transform:
    """World xy to SVG pixels, y flipped."""

    def __init__(self, box, size=480, pad=20):
        x0, y0, x1, y1 = box
        self.scale = (size - 2 * pad) / max(x1 - x0, y1 - y0, 1e-9)
        self.x0, self.y1, self.pad = x0, y1, pad
        self.w = pad * 2 + (x1 - x0) * self.scale
        self.h = pad * 2 + (y1 - y0) * self.scale

    def __call__(self, x: float, y: float) -> tuple[float, float]:
        return (self.pad + (x - self.x0) * self.scale,
                self.pad + (self.y1 - y) * self.scale)


def render_svg(tree: MinimaTree, scenario, node_id: int, samples: int = 256) -> str:
    """Workspace outline plus one path polyline, start green and goal red."""
    node = tree.nodes[node_id]
    box, euclidean = _chart_box(node.path.space)
    tf = _Transform(box)
    rows = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{tf.w:.0f}" height="{tf.h:.0f}">',
            "<style>.obs{fill:#cbd2d9;stroke:#52606d;stroke-width:1}"
            ".path{fill:none;stroke:#1f6feb;stroke-width:2}</style>",
            f'<rect x="{tf.pad}" y="{tf.pad}" width="{tf.w - 2 * tf.pad:.2f}" '
            f'height="{tf.h - 2 * tf.pad:.2f}" fill="white" stroke="#9aa5b1"/>']
    if euclidean:
        for ob in scenario.world.to_dict()["obstacles"]:
            rows.append(_svg_obstacle(ob, tf))
    pts = densify_path(node.path, samples)
    if pts.shape[1] < 2:
        pts = np.column_stack([pts[:, 0], np.zeros(len(pts))])
    poly = " ".join("{:.2f},{:.2f}".format(*tf(p[0], p[1])) for p in pts)
    rows.append(f'<polyline points="{poly}" class="path"/>')
    for xy, color in ((pts[0], "#2da44e"), (pts[-1], "#cf222e")):
        cx, cy = tf(xy[0], xy[1])
        rows.append(f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="5" fill="{color}"/>')
    rows.append(f'<title>node {node.id} level {node.level} cost {node.cost:.4f}</title>')
    rows.append("</svg>")
    return "\n".join(rows) + "\n"


def emit_svgs(tree: MinimaTree, scenario, out_dir: FsPath) -> list[FsPath]:
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for nid in sorted(tree.nodes):
        node = tree.nodes[nid]
        if node.path is None or node.children:
            continue
        dest = out_dir / f"leaf_{nid:03d}.svg"
        dest.write_text(render_svg(tree, scenario, nid))
        written.append(dest)
    return written


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pathminima")
    sub = ap.add_subparsers(dest="mode", required=True)

    b = sub.add_parser("batch", help="grow a minima tree and write it to a file")
    b.add_argument("--scenario", required=True, help="scenario file or builtin:<name>")
    b.add_argument("--depth", type=int, required=True,
                   help="number of levels to expand below the root")
    b.add_argument("--n", type=int, default=7, help="minima per node (default 7)")
    b.add_argument("--budget", type=parse_budget, default=(None, None),
                   help="per-expansion budget, e.g. 5000it or 2s")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--out", required=True, help="output tree file")
    b.add_argument("--emit-svg", default=None, metavar="DIR",
                   help="also write one SVG per leaf path into DIR")
    b.set_defaults(func=cli_batch)

    s = sub.add_parser("serve", help="run the session service")
    s.add_argument("--port", type=int, default=8703)
    s.add_argument("--scenario-dir", default=None)
    s.add_argument("--log-dir", default=None, help="directory for session event logs")
    s.set_defaults(func=cli_serve)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ScenarioError as e:
        print(f"scenario error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
