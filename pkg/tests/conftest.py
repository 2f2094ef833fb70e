import os

import pytest

from spatnet.model import Link, Network, SpatialObject
from spatnet.netio import load_network

DATASETS = os.path.join(os.path.dirname(__file__), "..", "datasets")


def dataset_path(name: str) -> str:
    return os.path.join(DATASETS, name)


def make_net(n_objects, pairs, topology="point", p=None, l=None, q=None, r=None):
    """Small directed network: objects 1..n, links from (from, to) pairs.

    p maps object id -> category, l/q/r map link index (0-based) -> value.
    """
    net = Network(topology)
    for oid in range(1, n_objects + 1):
        net.add_object(SpatialObject(id=oid, category_p=(p or {}).get(oid)))
    for idx, (a, b) in enumerate(pairs):
        net.add_link(Link(link_id=idx + 1, from_id=a, to_id=b,
                          category_l=(l or {}).get(idx),
                          q=(q or {}).get(idx, 1.0),
                          r=(r or {}).get(idx, 1.0)))
    return net


@pytest.fixture
def water_net():
    """The sample water-supply network: 6 objects, 7 registry rows."""
    return load_network(dataset_path("water_supply.json"))


@pytest.fixture
def traffic_grid():
    """Closed 4x4 torus of roads; every road feeds east and south."""
    return load_network(dataset_path("traffic_grid.json"))
