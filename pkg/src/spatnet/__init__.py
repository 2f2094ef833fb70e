"""Networks of spatial objects: model, validation, analysis, simulation."""

from .analysis import (
    PathResult,
    WeightSpec,
    all_pairs_floyd_warshall,
    max_flow_ford_fulkerson,
    point_no_flow,
    reachable_set,
    shortest_path_bellman_ford,
    shortest_path_dijkstra,
    single_source_bellman_ford,
    single_source_dijkstra,
)
from .geometry import Point, Polygon, Polyline, touches_line_line, touches_polygon_line
from .model import (
    Link,
    Network,
    SpatialObject,
    Violation,
    build_registry_from_geometry,
    validate_flow_factors,
)
from .netio import load_network, save_network
from .propagation import (
    InteractionSet,
    NetworkCoupling,
    NetworkState,
    SimulationState,
    apply_coupling,
    apply_interaction,
    cap_inflow,
    conservative_transfer,
    identity_interactions,
    probabilistic_propagation,
    probabilistic_receiving,
    simulate_frontier,
    simulate_full,
    split_outflow,
)
from .rng import RandomStream
from .rules import HierarchyConfig, detect_invalid_link_categories, detect_invalid_object_links
from .traffic import (
    Road,
    TrafficSimulation,
    bpr_speed,
    derive_time_step,
    incoming_capacity,
    mark_oversubscribed_links,
    outgoing_volume,
    simulate_traffic,
    validate_traffic_schema,
)

__version__ = "0.1.0"
