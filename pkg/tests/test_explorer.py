"""Session command loop: navigation, export, event log replay."""

import json

import numpy as np
import pytest

from pathminima.cspace import EuclideanAxis, Path, SpaceDescriptor
from pathminima.explorer import Session, densify_path, replay_events, session_view
from pathminima.minima_tree import MinimaNode
from support import car_slit_route


def _graft_children(sess, ys):
    """Attach hand-made level-0 nodes under the root, cheapest first."""
    tree = sess.tree
    space = tree.chain.space(0).space
    ids = []
    for y in ys:
        nid = tree._next_id
        tree._next_id += 1
        wp = np.array([[0.15, 0.5], [0.5, y], [0.85, 0.5]])
        tree.nodes[nid] = MinimaNode(nid, 0, Path(wp, space), tree.root_id)
        ids.append(nid)
    root = tree.nodes[tree.root_id]
    root.children = sorted(ids, key=lambda i: tree.nodes[i].cost)
    root.status = "expanded"
    return root.children


def test_navigation_saturates_with_notices(scenarios):
    sess = Session(scenarios["empty_2d"], {"seed": 2})
    kids = _graft_children(sess, [0.5, 0.7, 0.9])

    assert sess.view()["selection"] == sess.tree.root_id
    assert "notice" in sess.command("up")
    assert "notice" in sess.command("left")

    v = sess.command("down")
    assert v["selection"] == kids[0]
    v = sess.command("right")
    assert v["selection"] == kids[1]
    v = sess.command("right")
    assert v["selection"] == kids[2]
    v = sess.command("right")
    assert v["selection"] == kids[2] and "notice" in v

    v = sess.command("left")
    assert v["selection"] == kids[1] and "notice" not in v
    v = sess.command("up")
    assert v["selection"] == sess.tree.root_id

    v = sess.command("down")
    v = sess.command("down")
    assert v["selection"] == kids[0] and "notice" in v


def test_bad_commands_raise_and_are_not_logged(scenarios):
    sess = Session(scenarios["empty_2d"])
    n0 = len(sess.events)
    with pytest.raises(ValueError):
        sess.command("teleport")
    with pytest.raises(ValueError):
        sess.command("select", node_id=404)
    with pytest.raises(ValueError):
        sess.command("select")
    with pytest.raises(ValueError):
        sess.command("export_selected")
    assert len(sess.events) == n0


def test_expand_then_export(scenarios):
    sess = Session(scenarios["empty_2d"], {"seed": 3})
    v = sess.command("expand", iterations=1200)
    assert v["new_nodes"] and v["levels"] == {"-1": 1, "0": 1}

    sess.command("down")
    out = sess.command("export_selected")["export"]
    assert out["node"] == v["new_nodes"][0]
    assert out["level"] == 0
    assert "flag" not in out
    assert len(out["densified"]) == 128
    sc = scenarios["empty_2d"]
    assert np.allclose(out["waypoints"][0], sc.start)
    assert np.allclose(out["waypoints"][-1], sc.goal)
    assert np.allclose(out["densified"][0], sc.start)
    assert np.allclose(out["densified"][-1], sc.goal)

    sess.command("up")
    again = sess.command("expand", iterations=400)
    assert "notice" in again and again.get("new_nodes") is None


def test_intermediate_level_export_is_flagged(scenarios):
    sc = scenarios["planar_car"]
    sess = Session(sc, {"seed": 1})
    chain = sess.chain
    s2 = chain.project_config_to(sc.start, chain.K, 0)
    g2 = chain.project_config_to(sc.goal, chain.K, 0)
    bias = Path(car_slit_route(s2, g2, +1, np.random.default_rng(0)), chain.space(0).space)
    tree = sess.tree
    tree.nodes[1] = MinimaNode(1, 0, bias, tree.root_id)
    tree.nodes[tree.root_id].children = [1]
    tree._next_id = 2

    sess.command("select", node_id=1)
    out = sess.export_selected(samples=16)
    assert out["flag"] == "quotient-level path"
    assert len(out["densified"]) == 16


def test_view_is_a_plain_detached_snapshot(scenarios):
    sess = Session(scenarios["empty_2d"], {"seed": 2})
    _graft_children(sess, [0.6])
    v = session_view(sess.tree, sess.selection)
    json.dumps(v)
    v["nodes"][0]["children"].append(99)
    v["levels"]["7"] = 1
    fresh = session_view(sess.tree, sess.selection)
    assert 99 not in fresh["nodes"][0]["children"]
    assert "7" not in fresh["levels"]
    assert all(isinstance(k, str) for k in fresh["levels"])


def test_densify_endpoints_and_floor():
    space = SpaceDescriptor([EuclideanAxis(0, 1), EuclideanAxis(0, 2)])
    path = Path(np.array([[0.0, 0.0], [1.0, 2.0]]), space)
    dense = densify_path(path, 1)
    assert dense.shape == (2, 2)
    assert np.allclose(dense[0], [0, 0]) and np.allclose(dense[-1], [1, 2])


def test_replay_rebuilds_the_same_session(scenarios):
    sc = scenarios["empty_2d"]
    sess = Session(sc, {"seed": 6})
    sess.command("expand", iterations=900)
    sess.command("down")
    sess.command("export_selected")
    sess.command("up")
    sess.command("expand", iterations=300)
    sess.command("down")

    seqs = [e["seq"] for e in sess.events]
    assert seqs == list(range(1, len(seqs) + 1))

    twin = replay_events(sc, sess.events, {"seed": 6})
    assert twin.selection == sess.selection
    assert twin.tree.serialize() == sess.tree.serialize()
    assert twin.view() == sess.view()
