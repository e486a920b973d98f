"""Hypergraph data model, structural statistics and the text format.

Vertices and edges carry dense integer ids (their position).  A vertex label
is either ``None`` (structural, unlabeled hypergraph) or a sorted tuple of
integers drawn from ``1..m2``.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .errors import FormatError, NonUniform, NotATree

Label = Optional[tuple]


def _norm_label(label, m2: int) -> Label:
    if label is None:
        return None
    lab = tuple(sorted(set(int(x) for x in label)))
    for x in lab:
        if not 1 <= x <= m2:
            raise ValueError(f"label element {x} outside 1..{m2}")
    return lab


@dataclass(frozen=True)
class LabeledHypergraph:
    """Immutable vertex-labelled hypergraph.

    ``labels[v]`` is the label of vertex ``v``; ``edges[e]`` is the sorted
    vertex tuple of edge ``e``.  Parallel edges are allowed.
    """

    labels: tuple
    edges: tuple
    m2: int = 0

    def __post_init__(self):
        if self.m2 < 0:
            raise ValueError("m2 must be nonnegative")
        labels = tuple(_norm_label(lab, self.m2) for lab in self.labels)
        n = len(labels)
        edges = []
        for e in self.edges:
            vs = tuple(sorted(set(int(v) for v in e)))
            for v in vs:
                if not 0 <= v < n:
                    raise ValueError(f"edge references missing vertex {v}")
            edges.append(vs)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "edges", tuple(edges))

    @classmethod
    def unlabeled(cls, n_vertices: int, edges: Iterable[Iterable[int]]) -> "LabeledHypergraph":
        return cls((None,) * n_vertices, tuple(tuple(e) for e in edges), 0)

    @property
    def n_vertices(self) -> int:
        return len(self.labels)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def vertices(self) -> range:
        return range(len(self.labels))

    @property
    def is_labeled(self) -> bool:
        return any(lab is not None for lab in self.labels)

    @cached_property
    def vertex_edges(self) -> tuple:
        """Sorted incident edge ids per vertex."""
        inc = [[] for _ in self.labels]
        for ei, e in enumerate(self.edges):
            for v in e:
                inc[v].append(ei)
        return tuple(tuple(x) for x in inc)

    def degree(self, v: int) -> int:
        return len(self.vertex_edges[v])

    def weight(self, v: int) -> int:
        lab = self.labels[v]
        return 0 if lab is None else len(lab)

    def edge_sizes(self) -> list:
        return [len(e) for e in self.edges]

    def uniformity(self) -> Optional[int]:
        """Common edge size, or None if the sizes differ (or no edges)."""
        sizes = set(self.edge_sizes())
        return sizes.pop() if len(sizes) == 1 else None

    def relabel_vertices(self, perm: Sequence[int]) -> "LabeledHypergraph":
        """Vertex ``v`` becomes ``perm[v]``."""
        labels = [None] * self.n_vertices
        for v, lab in enumerate(self.labels):
            labels[perm[v]] = lab
        edges = tuple(tuple(perm[v] for v in e) for e in self.edges)
        return LabeledHypergraph(tuple(labels), edges, self.m2)

    def with_labels(self, labels: Sequence, m2: Optional[int] = None) -> "LabeledHypergraph":
        return LabeledHypergraph(tuple(labels), self.edges, self.m2 if m2 is None else m2)

    def components(self) -> list:
        """Connected components as (vertex ids, edge ids), ignoring degree-0 vertices."""
        parent = list(range(self.n_vertices))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in self.edges:
            for v in e[1:]:
                a, b = find(e[0]), find(v)
                if a != b:
                    parent[max(a, b)] = min(a, b)
        groups = {}
        for v in self.vertices:
            if self.vertex_edges[v]:
                groups.setdefault(find(v), []).append(v)
        edge_groups = {}
        for ei, e in enumerate(self.edges):
            if e:
                edge_groups.setdefault(find(e[0]), []).append(ei)
        return [(tuple(groups[r]), tuple(edge_groups.get(r, ()))) for r in sorted(groups)]

    def isolated_vertices(self) -> tuple:
        return tuple(v for v in self.vertices if not self.vertex_edges[v])

    def subhypergraph(self, vertex_ids: Sequence[int], edge_ids: Sequence[int]) -> "LabeledHypergraph":
        index = {v: i for i, v in enumerate(vertex_ids)}
        labels = tuple(self.labels[v] for v in vertex_ids)
        edges = tuple(tuple(index[v] for v in self.edges[e]) for e in edge_ids)
        return LabeledHypergraph(labels, edges, self.m2)

    def is_connected(self) -> bool:
        if not self.edges or self.isolated_vertices():
            return False
        return len(self.components()) == 1


def disjoint_union(parts: Sequence[LabeledHypergraph], m2: Optional[int] = None) -> LabeledHypergraph:
    labels, edges, off = [], [], 0
    for h in parts:
        labels.extend(h.labels)
        edges.extend(tuple(v + off for v in e) for e in h.edges)
        off += h.n_vertices
    if m2 is None:
        m2 = max((h.m2 for h in parts), default=0)
    return LabeledHypergraph(tuple(labels), tuple(edges), m2)


# -- structural statistics ---------------------------------------------------

@dataclass(frozen=True)
class DegreeProfile:
    degree: dict
    deg1: dict
    deg2plus: dict

    @property
    def deg1_total(self) -> int:
        return sum(1 for d in self.degree.values() if d == 1)

    @property
    def deg2plus_total(self) -> int:
        return sum(1 for d in self.degree.values() if d >= 2)


def degree_profile(h: LabeledHypergraph) -> DegreeProfile:
    degree = {v: h.degree(v) for v in h.vertices}
    deg1 = {ei: sum(1 for v in e if degree[v] == 1) for ei, e in enumerate(h.edges)}
    deg2 = {ei: sum(1 for v in e if degree[v] >= 2) for ei, e in enumerate(h.edges)}
    return DegreeProfile(degree, deg1, deg2)


def mu(h: LabeledHypergraph) -> int:
    """Sum of (deg - 2) over vertices of degree above 2."""
    return sum(h.degree(v) - 2 for v in h.vertices if h.degree(v) > 2)


def is_tree(h: LabeledHypergraph) -> bool:
    n1 = h.uniformity()
    if n1 is None:
        if not h.edges:
            raise NonUniform("hypergraph has no edges")
        raise NonUniform(f"edge sizes differ: {sorted(set(h.edge_sizes()))}")
    return h.is_connected() and h.n_vertices == (n1 - 1) * h.n_edges + 1


def is_tree_sequential(h: LabeledHypergraph) -> bool:
    """Tree test by greedy enumeration: each new edge meets the union in one vertex."""
    if h.uniformity() is None:
        raise NonUniform("edge sizes differ")
    if h.isolated_vertices() or not h.edges:
        return False
    remaining = list(range(h.n_edges))
    covered = set(h.edges[remaining.pop(0)])
    progress = True
    while remaining and progress:
        progress = False
        for ei in list(remaining):
            if len(covered.intersection(h.edges[ei])) == 1:
                covered.update(h.edges[ei])
                remaining.remove(ei)
                progress = True
    return not remaining and len(covered) == h.n_vertices


def leaf_edges(h: LabeledHypergraph) -> frozenset:
    n1 = h.uniformity()
    prof = degree_profile(h)
    return frozenset(ei for ei in range(h.n_edges) if prof.deg1[ei] == n1 - 1)


def mu_and_leaves(h: LabeledHypergraph):
    """Return ``(mu, leaf_count, leaf_edges)`` for a tree."""
    if not is_tree(h):
        raise NotATree("mu_and_leaves requires a tree")
    leaves = leaf_edges(h)
    return mu(h), len(leaves), leaves


def twin_classes(h: LabeledHypergraph) -> list:
    """Vertex classes sharing both label and incident edge set (size >= 1)."""
    groups = {}
    for v in h.vertices:
        groups.setdefault((h.labels[v] is None, h.labels[v] or (), h.vertex_edges[v]), []).append(v)
    return [tuple(g) for g in groups.values()]


def has_parallel_edges(h: LabeledHypergraph) -> bool:
    return len(set(h.edges)) != len(h.edges)


def handshake_holds(h: LabeledHypergraph) -> bool:
    return sum(h.degree(v) for v in h.vertices) == sum(len(e) for e in h.edges)


def label_counts(h: LabeledHypergraph) -> Counter:
    """Number of vertices whose label contains ``i``, for each ``i`` in 1..m2."""
    c = Counter({i: 0 for i in range(1, h.m2 + 1)})
    for lab in h.labels:
        if lab:
            c.update(lab)
    return c


# -- text format -------------------------------------------------------------

def format_hypergraph(h: LabeledHypergraph) -> str:
    lines = [f"m2 {h.m2}"]
    for v, lab in enumerate(h.labels):
        if lab is None:
            lines.append(f"vertex {v} -")
        elif lab:
            lines.append(f"vertex {v} " + " ".join(map(str, lab)))
        else:
            lines.append(f"vertex {v}")
    for ei, e in enumerate(h.edges):
        lines.append(f"edge {ei}" + "".join(f" {v}" for v in e))
    return "\n".join(lines) + "\n"


def parse_hypergraph(text: str) -> LabeledHypergraph:
    m2 = None
    labels, edges = {}, {}
    for lineno, raw in enumerate(text.split("\n"), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tok = line.split()
        try:
            if tok[0] == "m2":
                m2 = int(tok[1])
            elif tok[0] == "vertex":
                vid = int(tok[1])
                if vid in labels:
                    raise FormatError(f"line {lineno}: duplicate vertex {vid}")
                rest = tok[2:]
                labels[vid] = None if rest == ["-"] else tuple(int(x) for x in rest)
            elif tok[0] == "edge":
                eid = int(tok[1])
                if eid in edges:
                    raise FormatError(f"line {lineno}: duplicate edge {eid}")
                edges[eid] = tuple(int(x) for x in tok[2:])
            else:
                raise FormatError(f"line {lineno}: unknown record {tok[0]!r}")
        except (IndexError, ValueError) as exc:
            raise FormatError(f"line {lineno}: {exc}") from exc
    if m2 is None:
        raise FormatError("missing m2 record")
    if sorted(labels) != list(range(len(labels))) or sorted(edges) != list(range(len(edges))):
        raise FormatError("vertex and edge ids must be dense from 0")
    try:
        return LabeledHypergraph(tuple(labels[i] for i in range(len(labels))),
                                 tuple(edges[i] for i in range(len(edges))), m2)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc
