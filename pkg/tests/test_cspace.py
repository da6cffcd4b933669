import math

import numpy as np
import pytest

from pathminima.cspace import (
    CircleAxis,
    EuclideanAxis,
    Path,
    SpaceDescriptor,
    dedup_waypoints,
    wrap_angle,
)


def spaces_under_test():
    return [
        SpaceDescriptor([EuclideanAxis(-3, 3), EuclideanAxis(-2, 2)]),
        SpaceDescriptor([EuclideanAxis(-3, 3), EuclideanAxis(-2, 2),
                         EuclideanAxis(-math.pi / 2, 3 * math.pi / 2)]),
        SpaceDescriptor([CircleAxis()]),
        SpaceDescriptor([CircleAxis(), EuclideanAxis(-2.8, 2.8)]),
        SpaceDescriptor([CircleAxis(weight=0.5), EuclideanAxis(0, 1, weight=2.0)]),
    ]


def test_wrap_angle_range():
    vals = wrap_angle(np.linspace(-20, 20, 1001))
    assert np.all(vals >= -math.pi) and np.all(vals < math.pi)
    assert wrap_angle(math.pi) == -math.pi
    assert wrap_angle(0.25) == pytest.approx(0.25, abs=0)


def test_metric_axioms_bulk(rng):
    """Symmetry, non-negativity, identity, triangle inequality."""
    per_space = 2000  # five spaces, 10^4 triples in total
    for space in spaces_under_test():
        A = space.normalize(space.sample(rng, per_space))
        B = space.normalize(space.sample(rng, per_space))
        C = space.normalize(space.sample(rng, per_space))
        ab = space.distance_rows(A, B)
        ba = space.distance_rows(B, A)
        bc = space.distance_rows(B, C)
        ac = space.distance_rows(A, C)
        assert np.all(ab >= 0)
        assert np.allclose(ab, ba, rtol=0, atol=1e-12)
        assert np.all(ac <= ab + bc + 1e-9)
        assert np.allclose(space.distance_rows(A, A), 0.0, atol=0)


def test_metric_identity_of_indiscernibles(rng):
    for space in spaces_under_test():
        X = space.normalize(space.sample(rng, 200))
        d = space.distance_rows(X, X.copy())
        assert np.all(d == 0)
        # distinct points separate
        Y = space.normalize(space.sample(rng, 200))
        distinct = np.any(X != Y, axis=1)
        assert np.all(space.distance_rows(X, Y)[distinct] > 0)


def test_circle_distance_wraps():
    space = SpaceDescriptor([CircleAxis()])
    a = np.array([3.0])
    b = np.array([-3.0])
    assert space.distance(a, b) == pytest.approx(2 * math.pi - 6.0, abs=1e-12)


def test_weights_scale_distance():
    plain = SpaceDescriptor([EuclideanAxis(0, 1), EuclideanAxis(0, 1)])
    heavy = SpaceDescriptor([EuclideanAxis(0, 1, weight=3.0), EuclideanAxis(0, 1)])
    a, b = np.array([0.1, 0.5]), np.array([0.9, 0.5])
    assert heavy.distance(a, b) == pytest.approx(3 * plain.distance(a, b))


def test_interpolate_endpoints_and_wrap():
    space = SpaceDescriptor([CircleAxis(), EuclideanAxis(0, 2)])
    a = np.array([3.0, 0.2])
    b = np.array([-3.0, 1.0])
    assert np.array_equal(space.interpolate(a, b, 0.0), a)
    assert np.array_equal(space.interpolate(a, b, 1.0), b)
    mid = space.interpolate(a, b, 0.5)
    # the short way crosses the seam near +-pi
    assert abs(abs(mid[0]) - math.pi) < 0.15
    assert mid[1] == pytest.approx(0.6)


def test_interpolate_many_matches_scalar(rng):
    for space in spaces_under_test():
        a = space.normalize(space.sample(rng, 1)[0])
        b = space.normalize(space.sample(rng, 1)[0])
        ts = np.linspace(0, 1, 7)
        rows = space.interpolate_many(a, b, ts)
        for t, row in zip(ts, rows):
            assert np.allclose(row, space.interpolate(a, b, float(t)), atol=1e-12)


def test_normalize_idempotent_bitwise(rng):
    for space in spaces_under_test():
        X = space.normalize(space.sample(rng, 500) * 3.0)
        again = space.normalize(X)
        assert np.array_equal(X, again)


def test_path_length_and_eval():
    space = SpaceDescriptor([EuclideanAxis(0, 10), EuclideanAxis(0, 10)])
    p = Path([[0, 0], [3, 0], [3, 4]], space)
    assert p.length == pytest.approx(7.0)
    assert np.allclose(p.eval(0.0), [0, 0])
    assert np.allclose(p.eval(1.0), [3, 4])
    # 3/7 of the way is the first corner
    assert np.allclose(p.eval(3 / 7), [3, 0], atol=1e-12)
    many = p.eval_many(np.array([0.0, 3 / 7, 1.0]))
    assert np.allclose(many, [[0, 0], [3, 0], [3, 4]], atol=1e-12)


def test_path_eval_crosses_circle_seam():
    space = SpaceDescriptor([CircleAxis()])
    p = Path([[3.0], [-3.0]], space)
    assert p.length == pytest.approx(2 * math.pi - 6.0, abs=1e-9)
    mid = p.eval(0.5)[0]
    assert abs(abs(mid) - math.pi) < 1e-6


def test_dedup_waypoints_removes_repeats():
    space = SpaceDescriptor([EuclideanAxis(0, 1), EuclideanAxis(0, 1)])
    w = np.array([[0, 0], [0, 0], [0.5, 0.5], [0.5, 0.5], [1, 1]], dtype=float)
    out = dedup_waypoints(w, space)
    assert len(out) == 3


def test_phi_semantics(scenarios):
    ps = scenarios["planar_car"].build_chain().space(1)
    start = scenarios["planar_car"].start
    assert ps.phi(start) == 0
    inside_wall = np.array([0.0, 0.0, 0.0])
    assert ps.phi(inside_wall) == 1
    mask = ps.phi_batch(np.vstack([start, inside_wall]))
    assert mask.tolist() == [False, True]


def test_out_of_bounds_is_invalid(scenarios):
    ps = scenarios["planar_car"].build_chain().space(1)
    far = np.array([55.0, 0.0, 0.0])
    assert ps.phi(far) == 1


def test_segments_free_mask_clear_cases(scenarios):
    ps = scenarios["planar_car"].build_chain().space(0)
    A = np.array([[-2.0, 0.0], [-2.0, -1.8], [-0.5, 1.0]])
    B = np.array([[2.0, 0.0], [2.0, -1.8], [0.5, 1.0]])
    got = ps.segments_free_mask(A, B, 0.05)
    # through the wall center: blocked; along y=-1.8 the wall spans that row
    # too; straight through the top slit: free
    assert got.tolist() == [False, False, True]


def test_segment_free_matches_path_free(scenarios, rng):
    ps = scenarios["planar_car"].build_chain().space(0)
    from pathminima.cspace import Path as P
    for _ in range(40):
        a, b = ps.space.sample(rng, 2)
        seg = ps.segments_free_mask(a[None], b[None], 0.05)[0]
        path = P(np.vstack([a, b]), ps.space)
        assert seg == ps.path_free(path, 0.05)
