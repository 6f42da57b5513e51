import numpy as np
import pytest

from hypertess import GaussianMatrix, InvalidDimensionError, Seed, gaussian_matrix, gaussian_vector


def test_matrix_determinism():
    a = gaussian_matrix(Seed(42), 3, 2)
    b = gaussian_matrix(Seed(42), 3, 2)
    assert np.array_equal(a.entries, b.entries)
    assert a.m == 3 and a.n == 2


def test_matrix_sample_mean_clt_bound():
    # 4-sigma CLT band around 0 for 1000 standard normals
    a = gaussian_matrix(Seed(7), 1000, 1)
    assert abs(a.entries.mean()) <= 4.0 / np.sqrt(1000)


def test_matrix_sample_variance_band():
    a = gaussian_matrix(Seed(7), 1000, 1)
    assert 0.8 <= a.entries.var(ddof=1) <= 1.2


def test_vector_determinism_and_streams():
    v1 = gaussian_vector(Seed(5), 5)
    v2 = gaussian_vector(Seed(5), 5)
    assert np.array_equal(v1, v2)
    assert not np.array_equal(gaussian_vector(Seed(5, 0), 1), gaussian_vector(Seed(5, 1), 1))


def test_vector_sign_balance():
    v = gaussian_vector(Seed(11), 10000)
    frac = (v > 0).mean()
    assert abs(frac - 0.5) <= 0.02


def test_invalid_dimensions():
    with pytest.raises(InvalidDimensionError):
        gaussian_matrix(Seed(1), 0, 3)
    with pytest.raises(InvalidDimensionError):
        gaussian_matrix(Seed(1), 3, 0)
    with pytest.raises(InvalidDimensionError):
        gaussian_vector(Seed(1), 0)


def test_seed_validation():
    with pytest.raises(ValueError):
        Seed(-1)
    with pytest.raises(ValueError):
        Seed(2**64)
    assert Seed(3).stream(9) == Seed(3, 9)


def test_counter_blocks_disjoint_and_reproducible():
    s = Seed(13, 2)
    a0 = s.block(0).standard_normal(16)
    a0_again = s.block(0).standard_normal(16)
    a1 = s.block(1).standard_normal(16)
    assert np.array_equal(a0, a0_again)
    assert not np.array_equal(a0, a1)


def test_entries_are_frozen():
    a = gaussian_matrix(Seed(1), 2, 2)
    with pytest.raises(ValueError):
        a.entries[0, 0] = 0.0


def test_content_hash_tracks_content():
    a = gaussian_matrix(Seed(1), 4, 3)
    b = gaussian_matrix(Seed(1), 4, 3)
    c = gaussian_matrix(Seed(2), 4, 3)
    assert a.content_hash() == b.content_hash()
    assert a.content_hash() != c.content_hash()


def test_crafted_matrix_rejects_nonfinite():
    with pytest.raises(ValueError):
        GaussianMatrix(np.array([[np.nan, 0.0]]))
