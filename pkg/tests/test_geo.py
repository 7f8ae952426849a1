import numpy as np
import pytest

from perception_engine.extract.geo import haversine_m, haversine_matrix, spherical_mean


def test_hundredth_of_a_degree_of_latitude():
    assert haversine_m(41.8781, -87.6298, 41.8881, -87.6298) == pytest.approx(1111.9, abs=0.5)


def test_symmetric_and_zero_on_identity():
    a, b = (41.88, -87.63), (40.71, -74.01)
    assert haversine_m(*a, *b) == pytest.approx(haversine_m(*b, *a))
    assert haversine_m(*a, *a) == 0.0


def test_vectorised_distances_match_scalar():
    lats, lons = np.array([41.88, 41.90, 41.95]), np.array([-87.63, -87.70, -87.80])
    distances = haversine_m(41.88, -87.63, lats, lons)
    assert distances.shape == (3,)
    assert distances[1] == pytest.approx(haversine_m(41.88, -87.63, 41.90, -87.70))


def test_matrix_matches_pairwise():
    coords = [(41.88, -87.63), (41.90, -87.70), (41.95, -87.80)]
    matrix = haversine_matrix(coords)
    assert matrix.shape == (3, 3)
    assert np.allclose(matrix, matrix.T)
    assert matrix[0, 2] == pytest.approx(haversine_m(*coords[0], *coords[2]), rel=1e-9)


def test_spherical_mean_of_symmetric_points():
    lat, lon = spherical_mean([(41.0, -87.0), (42.0, -87.0)])
    assert lat == pytest.approx(41.5, abs=1e-3)
    assert lon == pytest.approx(-87.0)


def _random_points(rng: np.random.Generator, n: int) -> tuple[np.ndarray, np.ndarray]:
    return rng.uniform(-90.0, 90.0, n), rng.uniform(-180.0, 180.0, n)


def test_ten_thousand_random_pairs_are_symmetric_and_non_negative():
    rng = np.random.default_rng(8)
    lat1, lon1 = _random_points(rng, 10_000)
    lat2, lon2 = _random_points(rng, 10_000)
    forward = haversine_m(lat1, lon1, lat2, lon2)
    backward = haversine_m(lat2, lon2, lat1, lon1)
    assert np.allclose(forward, backward, rtol=1e-12, atol=1e-6)
    assert (forward >= 0.0).all()
    assert (forward <= np.pi * 6_371_000.0 + 1e-6).all()
    assert (haversine_m(lat1, lon1, lat1, lon1) == 0.0).all()


def test_triangle_inequality_on_random_triples():
    rng = np.random.default_rng(9)
    lat_a, lon_a = _random_points(rng, 5_000)
    lat_b, lon_b = _random_points(rng, 5_000)
    lat_c, lon_c = _random_points(rng, 5_000)
    ab = haversine_m(lat_a, lon_a, lat_b, lon_b)
    bc = haversine_m(lat_b, lon_b, lat_c, lon_c)
    ac = haversine_m(lat_a, lon_a, lat_c, lon_c)
    assert (ac <= ab + bc + 1e-3).all()


def test_matrix_agrees_with_scalar_on_random_points():
    rng = np.random.default_rng(10)
    lats, lons = _random_points(rng, 200)
    matrix = haversine_matrix(list(zip(lats, lons)))
    for i in range(len(lats)):
        assert np.allclose(matrix[i], haversine_m(lats[i], lons[i], lats, lons), rtol=1e-9, atol=1e-3)
    assert np.allclose(matrix, matrix.T, atol=1e-6)
    assert np.allclose(np.diag(matrix), 0.0, atol=1e-6)
    i, j, k = rng.integers(0, len(lats), size=(3, 2_000))
    assert (matrix[i, k] <= matrix[i, j] + matrix[j, k] + 1e-3).all()
