"""Exact finite combinatorics for weak amalgamation in omission classes of graphs."""

from .graph import Graph, VertexMap, find_embedding, find_weak_embedding, is_embedding, is_weak_embedding
from .classes import ForbiddenClass, parse_class
from .amalgamation import AmalgamationProblem, Amalgam, free_amalgam, find_amalgam

__version__ = "0.1.0"

__all__ = [
    "Graph",
    "VertexMap",
    "is_embedding",
    "is_weak_embedding",
    "find_embedding",
    "find_weak_embedding",
    "ForbiddenClass",
    "parse_class",
    "AmalgamationProblem",
    "Amalgam",
    "free_amalgam",
    "find_amalgam",
]
