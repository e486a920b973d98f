"""Distinguishing partitions of complete multipartite graphs, studied through
asymmetric vertex-labelled hypergraphs."""
from .automorphism import automorphisms, canonical_form, is_asymmetric
from .hypercore import LabeledHypergraph, format_hypergraph, parse_hypergraph
from .partition import MultipartiteShape, Params, RegularPartition, params

__all__ = ["LabeledHypergraph", "MultipartiteShape", "Params", "RegularPartition",
           "automorphisms", "canonical_form", "format_hypergraph", "is_asymmetric",
           "params", "parse_hypergraph"]
__version__ = "0.1.0"
