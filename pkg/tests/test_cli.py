"""Batch/serve command line: budgets, exit codes, determinism, SVG output."""

import json
import socket

import numpy as np
import pytest

from pathminima.cli import main, parse_budget, render_svg
from pathminima.cspace import Path
from pathminima.minima_tree import MinimaNode, MinimaTree

TOY = """
version: 1
name: toy
space:
  - - {kind: euclidean, low: 0.0, high: 1.0}
    - {kind: euclidean, low: 0.0, high: 1.0}
world:
  - {type: circle, center: [0.5, 0.5], radius: 0.1}
robot:
  - {type: point}
bundle: []
problem:
  start: [0.1, 0.1]
  goal: [0.9, 0.9]
"""

BLOCKED = """
version: 1
name: blocked
space:
  - - {kind: euclidean, low: 0.0, high: 1.0}
    - {kind: euclidean, low: 0.0, high: 1.0}
world:
  - {type: polygon, points: [[0.45, -0.2], [0.55, -0.2], [0.55, 1.2], [0.45, 1.2]]}
robot:
  - {type: point}
bundle: []
problem:
  start: [0.15, 0.5]
  goal: [0.85, 0.5]
"""


def test_parse_budget():
    assert parse_budget("20000it") == (20000, None)
    assert parse_budget("500") == (500, None)
    assert parse_budget("2s") == (None, 2.0)
    assert parse_budget(" 1.5s ") == (None, 1.5)
    for bad in ("", "5x", "1.5", "1.5it", "s"):
        with pytest.raises(ValueError):
            parse_budget(bad)


def test_batch_writes_a_tree(tmp_path):
    out = tmp_path / "tree.json"
    code = main(["batch", "--scenario", "builtin:empty_2d", "--depth", "1",
                 "--budget", "1200it", "--seed", "3", "--out", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    levels = [n["level"] for n in doc["nodes"]]
    assert levels.count(-1) == 1 and levels.count(0) == 1


def test_batch_depth_zero_only_grows_the_root(tmp_path):
    out = tmp_path / "tree.json"
    code = main(["batch", "--scenario", "builtin:empty_2d", "--depth", "0",
                 "--budget", "200it", "--out", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    assert [n["level"] for n in doc["nodes"]] == [-1]


def test_batch_is_byte_deterministic(tmp_path):
    blobs = []
    for tag in ("a", "b"):
        out = tmp_path / f"{tag}.json"
        code = main(["batch", "--scenario", "builtin:empty_2d", "--depth", "1",
                     "--budget", "900it", "--seed", "11", "--out", str(out)])
        assert code == 0
        blobs.append(out.read_bytes())
    assert blobs[0] == blobs[1]


def test_batch_scenario_errors_exit_2(tmp_path):
    out = tmp_path / "t.json"
    assert main(["batch", "--scenario", "builtin:nope", "--depth", "1",
                 "--out", str(out)]) == 2
    assert main(["batch", "--scenario", str(tmp_path / "missing.yaml"),
                 "--depth", "1", "--out", str(out)]) == 2
    assert not out.exists()


def test_batch_reads_scenario_files(tmp_path):
    doc = tmp_path / "toy.yaml"
    doc.write_text(TOY)
    out = tmp_path / "tree.json"
    assert main(["batch", "--scenario", str(doc), "--depth", "1",
                 "--budget", "2000it", "--out", str(out)]) == 0
    tree = json.loads(out.read_text())
    assert any(n["level"] == 0 for n in tree["nodes"])


def test_batch_reports_an_empty_base_level(tmp_path):
    doc = tmp_path / "blocked.yaml"
    doc.write_text(BLOCKED)
    out = tmp_path / "tree.json"
    code = main(["batch", "--scenario", str(doc), "--depth", "1",
                 "--budget", "300it", "--out", str(out)])
    assert code == 3
    tree = json.loads(out.read_text())
    assert [n["level"] for n in tree["nodes"]] == [-1]


def test_batch_emits_leaf_svgs(tmp_path):
    doc = tmp_path / "toy.yaml"
    doc.write_text(TOY)
    out = tmp_path / "tree.json"
    svg_dir = tmp_path / "svgs"
    assert main(["batch", "--scenario", str(doc), "--depth", "1",
                 "--budget", "2000it", "--out", str(out),
                 "--emit-svg", str(svg_dir)]) == 0
    files = sorted(svg_dir.glob("leaf_*.svg"))
    assert files
    body = files[0].read_text()
    assert body.startswith("<svg") and "<polyline" in body
    # one obstacle disk plus the start and goal markers
    assert body.count("<circle") == 3
    assert 'class="obs"' in body


def test_svg_chart_for_circle_factor_skips_obstacles(scenarios):
    sc = scenarios["planar_manipulator_2dof"]
    chain = sc.build_chain()
    tree = MinimaTree(chain, sc.start, sc.goal, sc.params, sc.scenario_hash)
    s = chain.project_config_to(sc.start, chain.K, 0)
    g = chain.project_config_to(sc.goal, chain.K, 0)
    base_path = Path(np.array([s, [0.0], g]), chain.space(0).space)
    tree.nodes[1] = MinimaNode(1, 0, base_path, tree.root_id)
    tree.nodes[tree.root_id].children = [1]
    tree._next_id = 2
    body = render_svg(tree, sc, 1)
    assert "<polyline" in body
    assert 'class="obs"' not in body


def test_serve_reports_a_busy_port():
    with socket.socket() as sk:
        sk.bind(("127.0.0.1", 0))
        sk.listen(1)
        port = sk.getsockname()[1]
        assert main(["serve", "--port", str(port)]) == 2
