"""Shortcut optimizer: monotonicity, fixed points, winding preservation."""

import numpy as np
import pytest

from pathminima.cspace import Path
from pathminima.optimize import OptimizerParams, is_fixed_point, optimize
from support import random_free_path


def test_params_validation():
    with pytest.raises(ValueError):
        OptimizerParams(shortcut_rounds=-1)
    with pytest.raises(ValueError):
        OptimizerParams(convergence_tol=0.5)
    with pytest.raises(ValueError):
        OptimizerParams(vertex_reduction_passes=0)


def test_zigzag_straightens(scenarios):
    sc = scenarios["empty_2d"]
    chain = sc.build_chain()
    ps = chain.space(chain.K)
    wp = np.array([[0.15, 0.5], [0.3, 0.8], [0.5, 0.2], [0.7, 0.8], [0.85, 0.5]])
    path = Path(wp, ps.space)
    opt = optimize(path, ps, OptimizerParams(seed=2))
    straight = float(ps.space.distance(wp[0], wp[-1]))
    assert opt.length <= straight * 1.02
    assert np.array_equal(opt.start, path.start)
    assert np.array_equal(opt.goal, path.goal)
    assert len(opt.waypoints) <= len(path.waypoints)


def test_monotone_and_fixed_point_on_random_paths(scenarios):
    params = OptimizerParams(seed=0)
    cases = [("empty_2d", 60), ("planar_car", 40)]
    for name, count in cases:
        sc = scenarios[name]
        chain = sc.build_chain()
        ps = chain.space(chain.K)
        rng = np.random.default_rng(77)
        for _ in range(count):
            path = random_free_path(ps, rng)
            opt = optimize(path, ps, params, np.random.default_rng(5))
            assert opt.length <= path.length + 1e-9
            assert ps.path_free(opt)
            assert np.array_equal(opt.start, path.start)
            assert np.array_equal(opt.goal, path.goal)
            assert is_fixed_point(opt, ps, params, np.random.default_rng(6))


def test_colliding_input_rejected(scenarios):
    sc = scenarios["planar_car"]
    chain = sc.build_chain()
    ps = chain.space(chain.K)
    through_wall = Path(np.array([sc.start, sc.goal]), ps.space)
    with pytest.raises(ValueError):
        optimize(through_wall, ps, OptimizerParams())


def test_winding_classes_survive(scenarios):
    # the first joint of the two-link arm never reaches the obstacle, so its
    # base circle is entirely free and both arcs between the endpoints are
    # geodesics; the optimizer must keep a wiggly route on its own side
    sc = scenarios["planar_manipulator_2dof"]
    chain = sc.build_chain()
    ps = chain.space(0)
    s = float(chain.project_config_to(sc.start, chain.K, 0)[0])
    g = float(chain.project_config_to(sc.goal, chain.K, 0)[0])
    params = OptimizerParams(seed=3)

    long_arc = abs(g - s)
    short_arc = 2.0 * np.pi - long_arc
    assert short_arc < long_arc

    via_zero = Path(np.array([[s], [0.8], [-0.3], [0.1], [-0.9], [g]]), ps.space)
    opt = optimize(via_zero, ps, params)
    assert opt.length == pytest.approx(long_arc, rel=1e-6)

    via_pi = Path(np.array([[s], [2.4], [2.0], [2.9], [g]]), ps.space)
    opt = optimize(via_pi, ps, params)
    assert opt.length == pytest.approx(short_arc, rel=1e-6)


def test_degenerate_path_is_fixed_point(scenarios):
    sc = scenarios["empty_2d"]
    ps = sc.build_chain().space(0)
    p = Path(np.array([[0.3, 0.3], [0.3, 0.3]]), ps.space)
    assert p.length == 0.0
    opt = optimize(p, ps, OptimizerParams())
    assert opt.length == 0.0
    assert is_fixed_point(opt, ps, OptimizerParams())
