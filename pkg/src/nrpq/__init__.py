"""Nested regular path queries compiled to monadic datalog and evaluated top-down."""

from .graph import Fact, FactDb, LabeledGraph, from_facts, load_graph, to_facts
from .syntax import parse_filter, parse_path, desugar, to_text

__all__ = [
    "Fact", "FactDb", "LabeledGraph", "from_facts", "load_graph", "to_facts",
    "parse_filter", "parse_path", "desugar", "to_text",
]
