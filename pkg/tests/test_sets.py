import itertools
import math

import numpy as np
import pytest

from hypertess import (
    DimensionMismatchError,
    FiniteSet,
    InsufficientTrialsError,
    Seed,
    SparseSphere,
    Sphere,
    mean_width,
    parse_model,
)


def chi_mean(n: int) -> float:
    """Closed-form mean of the chi distribution: E||g||_2 for g in R^n."""
    return math.sqrt(2.0) * math.gamma((n + 1) / 2.0) / math.gamma(n / 2.0)


def sparse_sup_oracle(g, s):
    """Brute force over all size-s supports: restricted sup is the restricted norm."""
    n = len(g)
    best = 0.0
    for support in itertools.combinations(range(n), s):
        best = max(best, float(np.linalg.norm(g[list(support)])))
    return best


def test_finite_single_point_sampling():
    x = np.array([[0.6, 0.8]])
    model = FiniteSet(x)
    for k in range(5):
        assert np.array_equal(model.sample(Seed(k, 1)), x[0])


def test_sparse_samples_constructive():
    model = SparseSphere(20, 2)
    pts = model.sample_many(200, Seed(1, 1))
    assert np.all((pts != 0).sum(axis=1) <= 2)
    assert np.allclose(np.linalg.norm(pts, axis=1), 1.0)


def test_sphere_sample_mean_concentrates():
    pts = Sphere(3).sample_many(10000, Seed(2, 1))
    assert np.linalg.norm(pts.mean(axis=0)) <= 0.05


def test_sup_signed_exact_values():
    assert Sphere(2).sup_signed([3.0, 4.0]) == 5.0
    assert FiniteSet(np.eye(2)).sup_signed([1.0, 0.0]) == 1.0
    got = SparseSphere(3, 2).sup_signed([3.0, -1.0, 2.0])
    assert got == pytest.approx(math.sqrt(13.0), abs=1e-12)
    assert got == pytest.approx(sparse_sup_oracle(np.array([3.0, -1.0, 2.0]), 2), abs=1e-12)


def test_sup_abs_exact_values():
    g = np.array([1.5, -2.5])
    assert Sphere(2).sup_abs(g) == np.linalg.norm(g)
    assert FiniteSet(np.array([[1.0, 0.0]])).sup_abs([-2.0, 0.0]) == 2.0
    assert SparseSphere(3, 2).sup_abs([3.0, -1.0, 2.0]) == pytest.approx(math.sqrt(13.0), abs=1e-12)


def test_sup_symmetric_sets_identity():
    rng = Seed(3, 1).generator()
    for _ in range(50):
        g = rng.standard_normal(6)
        assert Sphere(6).sup_abs(g) == Sphere(6).sup_signed(g)
        assert SparseSphere(6, 3).sup_abs(g) == SparseSphere(6, 3).sup_signed(g)


@pytest.mark.parametrize("n,s", [(4, 2), (6, 3), (8, 3)])
def test_sparse_matches_brute_force(n, s):
    rng = Seed(4, 1).generator()
    model = SparseSphere(n, s)
    for _ in range(100):
        g = rng.standard_normal(n)
        assert model.sup_signed(g) == pytest.approx(sparse_sup_oracle(g, s), abs=1e-12)


def test_mean_width_sphere_matches_chi_oracle():
    est = mean_width(Sphere(10), 60000, Seed(5, 1))
    assert abs(est.gaussian_width - chi_mean(10)) <= 3.0 * est.std_error
    # spherical width of the full sphere is exactly 1: sup |<theta, x>| = 1
    assert est.spherical_width == pytest.approx(1.0, abs=0.01)


def test_mean_width_single_point_half_normal():
    model = FiniteSet(np.array([[1.0, 0.0, 0.0]]))
    est = mean_width(model, 60000, Seed(6, 1))
    assert abs(est.gaussian_width - math.sqrt(2.0 / math.pi)) <= 3.0 * est.std_error


def test_mean_width_orthonormal_vs_scalar_oracle():
    # independent scalar Monte-Carlo oracle for E max_{i<=k} |g_i|
    k = 6
    oracle_rng = np.random.default_rng(987654321)
    draws = np.abs(oracle_rng.standard_normal((10**6, k))).max(axis=1)
    oracle = draws.mean()
    oracle_se = draws.std(ddof=1) / np.sqrt(draws.shape[0])

    est = mean_width(FiniteSet(np.eye(k)), 40000, Seed(7, 1))
    assert abs(est.gaussian_width - oracle) <= 3.0 * est.std_error + 3.0 * oracle_se


def test_diff_width_bounded_by_twice_width():
    pts = Sphere(8).sample_many(30, Seed(8, 1))
    est = mean_width(FiniteSet(pts), 20000, Seed(9, 1))
    assert est.diff_width <= 2.0 * est.gaussian_width + 3.0 * est.std_error


def test_finite_width_log_trend():
    # w(K) <= 3 sqrt(log k) at desk scale for k random sphere points
    rng_stream = 10
    for k in [4, 16, 64, 256, 1024]:
        pts = Sphere(32).sample_many(k, Seed(rng_stream, 1))
        est = mean_width(FiniteSet(pts), 4000, Seed(rng_stream, 2))
        assert est.gaussian_width <= 3.0 * math.sqrt(math.log(k)) + 3.0 * est.std_error
        rng_stream += 1


def test_mean_width_block_schedule_independent_of_total():
    # same leading blocks regardless of later ones: prefix sums agree
    est_a = mean_width(Sphere(5), 10000, Seed(11, 1))
    est_b = mean_width(Sphere(5), 10000, Seed(11, 1))
    assert est_a == est_b


def test_mean_width_needs_two_trials():
    with pytest.raises(InsufficientTrialsError):
        mean_width(Sphere(3), 1, Seed(12, 1))


def test_sup_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        Sphere(3).sup_signed([1.0, 2.0])


def test_parse_model():
    assert parse_model("sphere:n=10").name == "sphere:n=10"
    m = parse_model("sparse:n=20,s=2")
    assert (m.n, m.s) == (20, 2)
    with pytest.raises(ValueError):
        parse_model("torus:n=3")
    with pytest.raises(ValueError):
        parse_model("sparse:n=20")
    with pytest.raises(ValueError):
        SparseSphere(3, 4)
