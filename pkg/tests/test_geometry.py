import numpy as np
import pytest

from hypertess import (
    DegenerateInputError,
    DimensionMismatchError,
    EmptyInputError,
    NotCoveredError,
    Seed,
    Sphere,
    build_epsilon_net,
    decompose,
    euclidean,
    geodesic,
    spherical_project,
)


def unit(v):
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


def test_geodesic_trivials():
    x = unit([0.3, -0.7, 0.2])
    assert geodesic(x, x) == 0.0
    assert geodesic(x, -x) == 1.0
    assert geodesic([1.0, 0.0], [0.0, 1.0]) == 0.5


def test_euclidean_trivials():
    assert euclidean([1.0, 2.0], [1.0, 2.0]) == 0.0
    assert euclidean([1.0, 0.0], [-1.0, 0.0]) == 2.0
    assert euclidean([3.0, 4.0], [0.0, 0.0]) == 5.0


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        geodesic([1.0, 0.0], [1.0, 0.0, 0.0])
    with pytest.raises(DimensionMismatchError):
        euclidean([1.0], [1.0, 0.0])


def test_spherical_project():
    e_last = spherical_project([0.0, 0.0, 0.0, 2.5])
    assert np.array_equal(e_last, [0.0, 0.0, 0.0, 1.0])
    x = np.array([0.6, 0.8])  # exactly unit in float64
    assert np.array_equal(spherical_project(x), x)
    assert np.array_equal(spherical_project([3.0, 4.0]), [0.6, 0.8])
    # idempotence up to the last ulp for generic inputs
    y = spherical_project([1.0, 2.0, 2.0])
    again = spherical_project(y)
    assert np.all(np.abs(again - y) <= np.finfo(float).eps * np.abs(y))
    with pytest.raises(DegenerateInputError):
        spherical_project([0.0, 0.0])


def _greedy_oracle(points, eps):
    """Independent re-derivation of the stated greedy scan."""
    centers = []
    for p in points:
        if all(np.linalg.norm(p - c) > eps for c in centers):
            centers.append(p)
    return centers


def test_net_trivial_sizes():
    pts = np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0]])
    assert build_epsilon_net(pts, 3.0).size == 1  # eps >= diameter
    assert build_epsilon_net(pts, 0.5).size == 3  # eps below min pairwise distance


def test_net_eight_points_on_circle():
    angles = np.arange(8) * (2 * np.pi / 8)
    pts = np.column_stack([np.cos(angles), np.sin(angles)])
    oracle = _greedy_oracle(pts, 0.8)
    net = build_epsilon_net(pts, 0.8)
    assert net.size == len(oracle) == 4
    assert np.array_equal(net.center_indices, [0, 2, 4, 6])


def test_net_invariants_brute_force():
    pts = Sphere(6).sample_many(400, Seed(21, 1))
    eps = 0.9
    net = build_epsilon_net(pts, eps)
    # covering: every point within eps of its assigned center
    for k in range(pts.shape[0]):
        assert np.linalg.norm(pts[k] - net.centers[net.assignment[k]]) <= eps
    # separation: centers pairwise farther than eps
    for i in range(net.size):
        d = np.linalg.norm(net.centers[i + 1 :] - net.centers[i], axis=1)
        assert np.all(d > eps)


def test_net_sudakov_ratio_reported():
    # conformance against the covering-entropy scaling is reported, not asserted
    pts = Sphere(6).sample_many(300, Seed(22, 1))
    net = build_epsilon_net(pts, 0.5)
    ratio = net.sudakov_ratio(width=2.0)
    assert ratio >= 0.0
    assert build_epsilon_net(pts, 10.0).sudakov_ratio(width=2.0) == 0.0


def test_net_errors():
    with pytest.raises(EmptyInputError):
        build_epsilon_net(np.zeros((0, 3)), 0.5)
    with pytest.raises(ValueError):
        build_epsilon_net(np.eye(3), 0.0)


def test_decompose_center_is_exact():
    pts = Sphere(5).sample_many(60, Seed(4, 1))
    net = build_epsilon_net(pts, 0.9)
    x = net.centers[2]
    center, tail = decompose(x, net)
    assert np.array_equal(center, x)
    assert np.all(tail == 0.0)
    assert np.array_equal(center + tail, x)


def test_decompose_tail_norm_within_epsilon():
    pts = Sphere(10).sample_many(100, Seed(8, 1))
    net = build_epsilon_net(pts, 0.9)
    x = Sphere(10).sample_many(1, Seed(9, 1))[0]
    center, tail = decompose(x, net)
    assert np.linalg.norm(tail) <= 0.9
    # reconstruction error is bounded by rounding of the subtraction
    rec = center + tail
    assert np.all(np.abs(rec - x) <= 2.0**-52 * (np.abs(tail) + np.abs(x)))


def test_decompose_not_covered():
    net = build_epsilon_net(np.array([[1.0, 0.0]]), 0.1)
    with pytest.raises(NotCoveredError):
        decompose(np.array([0.0, 1.0]), net)


def test_geodesic_metric_properties():
    rng = Sphere(8)
    pts = rng.sample_many(90, Seed(33, 1))
    trips = pts.reshape(30, 3, 8)
    for x, y, z in trips:
        assert geodesic(x, y) == geodesic(y, x)
        assert geodesic(x, z) <= geodesic(x, y) + geodesic(y, z) + 1e-12


def test_parallelogram_identity():
    pts = Sphere(12).sample_many(200, Seed(34, 1))
    for k in range(0, 200, 2):
        x, y = pts[k], pts[k + 1]
        lhs = np.linalg.norm(x - y) ** 2
        rhs = 4.0 - np.linalg.norm(x + y) ** 2
        assert abs(lhs - rhs) <= 1e-12


def test_metric_equivalence_small_scale():
    # pairs at geodesic distance <= 0.2: pi*d >= ||x-y|| >= 2 sin(pi d / 2)
    base = Sphere(6).sample_many(80, Seed(35, 1))
    rng = Seed(36, 1).generator()
    for x in base:
        y = x + 0.2 * rng.standard_normal(6)
        y /= np.linalg.norm(y)
        d = geodesic(x, y)
        if d > 0.2:
            continue
        chord = np.linalg.norm(x - y)
        assert np.pi * d >= chord - 1e-12
        assert chord >= 2.0 * np.sin(np.pi * d / 2.0) - 1e-12
