"""
Great-circle geometry on a sphere of radius 6,371 km.
"""
from typing import Sequence

import numpy as np
from sklearn.metrics.pairwise import haversine_distances

EARTH_RADIUS_M = 6_371_000.0


def haversine_m(lat1, lon1, lat2, lon2):
    """Haversine distance in metres; accepts scalars or numpy arrays (degrees)."""
    phi1, lam1, phi2, lam2 = map(np.radians, (lat1, lon1, lat2, lon2))
    a = np.sin((phi2 - phi1) / 2.0) ** 2 + np.cos(phi1) * np.cos(phi2) * np.sin((lam2 - lam1) / 2.0) ** 2
    distance = 2.0 * EARTH_RADIUS_M * np.arcsin(np.sqrt(np.clip(a, 0.0, 1.0)))
    return float(distance) if np.ndim(distance) == 0 else distance


def haversine_matrix(coords: Sequence[tuple[float, float]]) -> np.ndarray:
    """Pairwise distances in metres between (lat, lon) points."""
    radians = np.radians(np.asarray(coords, dtype=np.float64).reshape(-1, 2))
    return haversine_distances(radians) * EARTH_RADIUS_M


def spherical_mean(coords: Sequence[tuple[float, float]]) -> tuple[float, float]:
    """Mean of (lat, lon) points taken on the unit sphere."""
    radians = np.radians(np.asarray(coords, dtype=np.float64).reshape(-1, 2))
    lat, lon = radians[:, 0], radians[:, 1]
    xyz = np.column_stack((np.cos(lat) * np.cos(lon), np.cos(lat) * np.sin(lon), np.sin(lat))).mean(axis=0)
    mean_lat = np.degrees(np.arctan2(xyz[2], np.hypot(xyz[0], xyz[1])))
    mean_lon = np.degrees(np.arctan2(xyz[1], xyz[0]))
    return float(mean_lat), float(mean_lon)
