"""
Point-in-neighborhood lookups (shapely). A point on a boundary belongs to no neighborhood.
"""
from functools import lru_cache
from typing import Sequence

from shapely.geometry import Point, Polygon
from shapely.prepared import prep

from perception_engine.schemas import NeighborhoodSpec


@lru_cache(maxsize=1024)
def _prepared(spec: NeighborhoodSpec):
    return prep(Polygon([(lon, lat) for lat, lon in spec.ring]))


def contains(spec: NeighborhoodSpec, lat: float, lon: float) -> bool:
    return _prepared(spec).contains(Point(lon, lat))


def locate(lat: float, lon: float, neighborhoods: Sequence[NeighborhoodSpec]) -> list[str]:
    """Names of every neighborhood containing the point, in input order."""
    return [n.name for n in neighborhoods if contains(n, lat, lon)]
