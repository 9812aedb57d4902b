"""Deterministic Ramsey partitions, distance oracles, Ramsey spanning trees and compact routing."""
from .forest import ForestCollection, build_forest, spanner_union, stretch_bound
from .graph import (Disconnected, GraphError, InvalidWeight, MalformedEdge, NotInView, SubgraphView,
                    WeightedGraph, ball, diameter, dijkstra, load_graph, metric_closure, radius)
from .oracle import EpsilonOracle, OracleCollection, build_basic, build_epsilon, build_reduced, query, query_epsilon
from .partition import Hierarchy, MarkState, build_fpsdhpp
from .petal import create_petal, hierarchical_petal_decomposition, petal_decomposition, petal_set
from .routing import build_network_scheme, build_tree_scheme, measure_scheme, route_step, simulate_route
from .ultrametric import LcaIndex, UltrametricTree, embed, oracle_tree

__version__ = "0.1.0"

__all__ = [
    "Disconnected", "EpsilonOracle", "ForestCollection", "GraphError", "Hierarchy", "InvalidWeight",
    "LcaIndex", "MalformedEdge", "MarkState", "NotInView", "OracleCollection", "SubgraphView",
    "UltrametricTree", "WeightedGraph", "ball", "build_basic", "build_epsilon", "build_forest",
    "build_fpsdhpp", "build_network_scheme", "build_reduced", "build_tree_scheme", "create_petal",
    "diameter", "dijkstra", "embed", "hierarchical_petal_decomposition", "load_graph", "measure_scheme",
    "metric_closure", "oracle_tree", "petal_decomposition", "petal_set", "query", "query_epsilon",
    "radius", "route_step", "simulate_route", "spanner_union", "stretch_bound",
]
