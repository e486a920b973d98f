"""Regular partitions of complete multipartite graphs and the weight calculus.

A regular partition of the vertex set X of K_{n_1,...,n_m} meets every part
in at most one vertex per cell.  ``tau`` turns it into a hypergraph (cells are
vertices, parts are edges); ``tau_prime`` keeps only the n1-edges and records
membership in the m2 large parts as a vertex label.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Optional, Sequence

from .automorphism import automorphisms
from .errors import (BadPartition, FormatError, NotRegular, TooLarge,
                     TooManyDistinctLabels, UnlabeledVertex)
from .hypercore import LabeledHypergraph, degree_profile, is_tree, mu

# -- shapes and partitions ---------------------------------------------------


@dataclass(frozen=True)
class MultipartiteShape:
    part_sizes: tuple

    def __post_init__(self):
        sizes = tuple(int(x) for x in self.part_sizes)
        if any(x < 1 for x in sizes):
            raise ValueError("part sizes must be positive")
        object.__setattr__(self, "part_sizes", sizes)

    @classmethod
    def two_block(cls, m1: int, n1: int, m2: int, n2: int) -> "MultipartiteShape":
        if m1 < 1 or m2 < 0:
            raise ValueError("need m1 >= 1 and m2 >= 0")
        return cls((n1,) * m1 + (n2,) * m2)

    @property
    def m(self) -> int:
        return len(self.part_sizes)

    @property
    def total(self) -> int:
        return sum(self.part_sizes)

    def vertices(self):
        return [(p, i) for p, n in enumerate(self.part_sizes) for i in range(n)]


@dataclass(frozen=True)
class RegularPartition:
    shape: MultipartiteShape
    cells: tuple  # tuple of frozensets of (part, index)

    def __post_init__(self):
        cells = tuple(frozenset((int(p), int(i)) for p, i in c) for c in self.cells)
        object.__setattr__(self, "cells", cells)
        seen = set()
        for c in cells:
            if not c:
                raise BadPartition("empty cell")
            if seen & c:
                raise BadPartition("cells overlap")
            seen |= c
        if seen != set(self.shape.vertices()):
            raise BadPartition("cells do not cover the shape")

    def is_regular(self) -> bool:
        return all(len({p for p, _ in c}) == len(c) for c in self.cells)

    def _check(self):
        if not self.is_regular():
            raise NotRegular("a cell meets some part twice")


def tau(p: RegularPartition) -> LabeledHypergraph:
    """Cells become vertices, parts become edges."""
    p._check()
    edges = [[] for _ in range(p.shape.m)]
    for ci, c in enumerate(p.cells):
        for part, _ in c:
            edges[part].append(ci)
    return LabeledHypergraph.unlabeled(len(p.cells), edges)


def tau_prime(p: RegularPartition, m2_parts: Sequence[int]) -> LabeledHypergraph:
    """Keep the n1-edges; label a cell by the designated parts it meets.

    ``m2_parts[i-1]`` is the part index playing the role of large part ``i``.
    """
    p._check()
    m2_parts = list(m2_parts)
    pos = {part: i + 1 for i, part in enumerate(m2_parts)}
    small = [q for q in range(p.shape.m) if q not in pos]
    labels = []
    edges = [[] for _ in small]
    sidx = {q: i for i, q in enumerate(small)}
    for ci, c in enumerate(p.cells):
        labels.append(tuple(sorted(pos[q] for q, _ in c if q in pos)))
        for q, _ in c:
            if q in sidx:
                edges[sidx[q]].append(ci)
    return LabeledHypergraph(tuple(labels), tuple(tuple(e) for e in edges), len(m2_parts))


def tau_inverse(h: LabeledHypergraph) -> RegularPartition:
    """Regular partition whose τ is ``h`` (edges are parts, no isolated vertices)."""
    if h.isolated_vertices():
        raise BadPartition("isolated vertices have no cell content")
    if any(not e for e in h.edges):
        raise BadPartition("an empty edge would be a part of size 0")
    shape = MultipartiteShape(tuple(len(e) for e in h.edges))
    cells = [[] for _ in h.vertices]
    for ei, e in enumerate(h.edges):
        for idx, v in enumerate(e):
            cells[v].append((ei, idx))
    return RegularPartition(shape, tuple(cells))


def tau_prime_to_tau(h: LabeledHypergraph) -> LabeledHypergraph:
    """Unlabelled hypergraph with the label sets turned back into m2 extra edges."""
    if any(lab is None for lab in h.labels):
        raise UnlabeledVertex("every vertex needs a label")
    extra = [[v for v in h.vertices if i in h.labels[v]] for i in range(1, h.m2 + 1)]
    return LabeledHypergraph.unlabeled(h.n_vertices, list(h.edges) + extra)


def tau_prime_inverse(h: LabeledHypergraph) -> tuple:
    """Return ``(partition, m2_parts)`` reconstructing a τ′-form hypergraph."""
    full = tau_prime_to_tau(h)
    part = tau_inverse(full)
    m2_parts = list(range(h.n_edges, h.n_edges + h.m2))
    return part, m2_parts


# -- direct automorphisms of the partition ------------------------------------

def partition_automorphism_order(p: RegularPartition, max_vertices: int = 12) -> int:
    """|aut(P)| computed on X itself.

    A permutation of X counts when it preserves "same part" and "same cell" in
    both directions.  The order comes from orbit-stabiliser with a plain
    backtracking extension test (no refinement).
    """
    xs = p.shape.vertices()
    n = len(xs)
    if n > max_vertices:
        raise TooLarge(f"{n} vertices exceeds bound {max_vertices}")
    cell_of = {}
    for ci, c in enumerate(p.cells):
        for x in c:
            cell_of[x] = ci
    part = [x[0] for x in xs]
    cell = [cell_of[x] for x in xs]
    sig = [(p.shape.part_sizes[part[a]], len(p.cells[cell[a]])) for a in range(n)]

    def compatible(img, a, b):
        if sig[a] != sig[b]:
            return False
        for c, d in img.items():
            if d == b:
                return False
            if (part[a] == part[c]) != (part[b] == part[d]):
                return False
            if (cell[a] == cell[c]) != (cell[b] == cell[d]):
                return False
        return True

    def extendable(img):
        free = [a for a in range(n) if a not in img]

        def rec(i):
            if i == len(free):
                return True
            a = free[i]
            for b in range(n):
                if compatible(img, a, b):
                    img[a] = b
                    if rec(i + 1):
                        return True
                    del img[a]
            return False

        return rec(0)

    total = 1
    fixed = {}
    for a in range(n):
        orbit = sum(1 for b in range(n)
                    if compatible(fixed, a, b) and extendable({**fixed, a: b}))
        total *= orbit
        fixed[a] = a
    return total


def aut_equivalence_check(p: RegularPartition, max_vertices: int = 12) -> bool:
    return partition_automorphism_order(p, max_vertices) == automorphisms(tau(p)).group_order


def enumerate_regular_partitions(shape: MultipartiteShape):
    """Yield every regular partition of ``shape`` (cells are sets, order-free)."""
    xs = shape.vertices()

    def rec(i, cells):
        if i == len(xs):
            yield RegularPartition(shape, tuple(frozenset(c) for c in cells))
            return
        x = xs[i]
        for c in cells:
            if all(q != x[0] for q, _ in c):
                c.append(x)
                yield from rec(i + 1, cells)
                c.pop()
        cells.append([x])
        yield from rec(i + 1, cells)
        cells.pop()

    yield from rec(0, [])


# -- parameters --------------------------------------------------------------


@dataclass(frozen=True)
class Params:
    n1: int
    m2: int
    j: int
    k: int
    r: Fraction

    @property
    def J(self) -> int:
        return (self.m2 - 1) // 2

    def __str__(self) -> str:
        return f"j={self.j} k={self.k} r={self.r.numerator}/{self.r.denominator}" \
            if self.r.denominator != 1 else f"j={self.j} k={self.k} r={self.r.numerator}"


def params(n1: int, m2: int) -> Params:
    if n1 < 2 or m2 < 1:
        raise ValueError("need n1 >= 2 and m2 >= 1")
    J = (m2 - 1) // 2
    if n1 == 2:
        return Params(n1, m2, -1, 0, Fraction(1))
    rest = n1 - 2
    j = -1
    while j < J and rest >= comb(m2, j + 1):
        rest -= comb(m2, j + 1)
        j += 1
    k = rest
    base = Fraction(1) + sum(Fraction((m2 - i) * comb(m2, i), m2) for i in range(j + 1))
    if j < J:
        r = base + Fraction((m2 - j - 1) * k, m2)
    else:
        r = base + Fraction(k, 2)
    return Params(n1, m2, j, k, r)


def xi(h: LabeledHypergraph, power: int = 1) -> LabeledHypergraph:
    """Rotate every label element by ``power`` modulo m2 (values stay in 1..m2)."""
    m2 = h.m2
    if m2 == 0:
        return h
    labels = [None if lab is None else tuple((x - 1 + power) % m2 + 1 for x in lab) for lab in h.labels]
    return h.with_labels(labels)


# -- weights, caps, defects --------------------------------------------------

def w_cap(size: int, m2: int) -> int:
    """Largest total weight of ``size`` pairwise distinct subsets of [m2]."""
    if size < 0:
        raise ValueError("size must be nonnegative")
    if size > 2 ** m2:
        raise TooManyDistinctLabels(f"{size} distinct labels exceed 2^{m2}")
    total, left = 0, size
    for i in range(m2 + 1):
        take = min(left, comb(m2, i))
        total += take * (m2 - i)
        left -= take
        if not left:
            break
    return total


@dataclass(frozen=True)
class ComponentValue:
    vertices: tuple
    edges: tuple
    weight: int
    value: Fraction


@dataclass(frozen=True)
class WeightReport:
    components: tuple
    isolated_weight: int
    weight: int
    value: Fraction
    implied_n2: Fraction


def _require_labels(h: LabeledHypergraph):
    if any(lab is None for lab in h.labels):
        raise UnlabeledVertex("weight needs every vertex labelled")


def weight_and_value(h: LabeledHypergraph, prm: Params) -> WeightReport:
    _require_labels(h)
    rm2 = prm.r * prm.m2
    comps = []
    for vs, es in h.components():
        w = sum(h.weight(v) for v in vs)
        comps.append(ComponentValue(vs, es, w, w - rm2 * len(es)))
    iso = sum(h.weight(v) for v in h.isolated_vertices())
    w = sum(h.weight(v) for v in h.vertices)
    return WeightReport(tuple(comps), iso, w, w - rm2 * h.n_edges,
                        Fraction(w, prm.m2) if prm.m2 else Fraction(0))


@dataclass(frozen=True)
class DefectReport:
    defective_vertices: dict
    defective_edges: dict

    @property
    def total(self) -> int:
        return sum(self.defective_vertices.values()) + sum(self.defective_edges.values())


def defects(h: LabeledHypergraph, prm: Optional[Params] = None) -> DefectReport:
    _require_labels(h)
    m2 = h.m2 if prm is None else prm.m2
    dv = {}
    for v in h.vertices:
        if h.degree(v) >= 2 and h.weight(v) < m2:
            dv[v] = m2 - h.weight(v)
    de = {}
    for ei, e in enumerate(h.edges):
        s = [v for v in e if h.degree(v) == 1]
        d = w_cap(len(s), m2) - sum(h.weight(v) for v in s)
        if d > 0:
            de[ei] = d
    return DefectReport(dv, de)


# -- upper bounds --------------------------------------------------------------

def w_max(p: Fraction, mu_: int, d: int, n_edges: int, n1: int, m2: int) -> Optional[Fraction]:
    """Weight cap from filling degree-1 slots greedily with the heaviest labels."""
    slots = 2 * p + mu_
    if slots != int(slots) or slots < 0:
        return None
    slots = int(slots)
    total = Fraction(m2) * (Fraction(n1 * n_edges, 2) - p - mu_)
    for i in range(m2 + 1):
        cap = n_edges * comb(m2, i)
        take = min(slots, cap)
        total += take * (m2 - i)
        slots -= take
        if not slots:
            break
    if slots:
        return None
    return total - d


def eq1_bound(n_edges: int, n1: int, m2: int) -> Fraction:
    J = (m2 - 1) // 2
    s = sum(comb(m2, i) for i in range(J + 1))
    t = sum((m2 - i) * comb(m2, i) for i in range(J + 1))
    return n_edges * (Fraction(m2 * n1, 2) - Fraction(m2 * s, 2) + t)


@dataclass(frozen=True)
class BoundCheck:
    name: str
    bound: Optional[Fraction]
    actual: Fraction
    holds: bool


@dataclass(frozen=True)
class ComponentBounds:
    vertices: tuple
    edges: tuple
    weight: int
    value: Fraction
    defects: int
    is_tree: bool
    checks: tuple

    def failures(self):
        return [c for c in self.checks if not c.holds]


@dataclass(frozen=True)
class BoundsReport:
    components: tuple
    global_check: BoundCheck
    global_addend: int

    @property
    def all_hold(self) -> bool:
        return self.global_check.holds and all(not c.failures() for c in self.components)


def _check(name, bound, actual):
    holds = True if bound is None else actual <= bound
    return BoundCheck(name, None if bound is None else Fraction(bound), Fraction(actual), holds)


def component_bounds(g: LabeledHypergraph, prm: Params) -> ComponentBounds:
    """All per-component bounds for a connected n1-uniform τ′-form component."""
    m2, n1 = prm.m2, prm.n1
    t = g.n_edges
    prof = degree_profile(g)
    dr = defects(g, prm)
    d = dr.total
    w = sum(g.weight(v) for v in g.vertices)
    val = w - prm.r * m2 * t
    mu_ = mu(g)
    checks = []
    tree = is_tree(g)

    # each edge's degree-1 vertices weigh at most the greedy cap for their count
    excess = None
    for e in range(t):
        leafs = [v for v in g.edges[e] if g.degree(v) == 1]
        try:
            over = sum(g.weight(v) for v in leafs) - w_cap(len(leafs), m2)
        except TooManyDistinctLabels:
            excess = None
            break
        excess = over if excess is None else max(excess, over)
    checks.append(_check("edge_caps", None if excess is None else 0, 0 if excess is None else excess))

    # weight against degree-2+ count and per-edge caps
    try:
        caps = sum(w_cap(prof.deg1[e], m2) for e in range(t))
        b43 = m2 * prof.deg2plus_total + caps - d
    except TooManyDistinctLabels:
        b43 = None
    checks.append(_check("deg2_plus_caps", b43, w))

    # degree-1 slot count identity and balanced split
    p = Fraction(g.n_vertices) - Fraction(n1 * t, 2)
    slots = 2 * p + mu_
    checks.append(BoundCheck("deg1_identity", Fraction(slots), Fraction(prof.deg1_total),
                             slots == prof.deg1_total))
    s = int(slots)
    lo, hi = s // t, -(-s // t)
    b_hi = s - lo * t
    b_lo = t - b_hi
    try:
        b44 = m2 * Fraction(n1 * t, 2) - m2 * p - m2 * mu_ + b_lo * w_cap(lo, m2) + b_hi * w_cap(hi, m2) - d
    except TooManyDistinctLabels:
        b44 = None
    checks.append(_check("balanced_split", b44, w))

    checks.append(_check("w_max", w_max(p, mu_, d, t, n1, m2), w))
    checks.append(_check("eq1", eq1_bound(t, n1, m2), w))

    rm2t = prm.r * m2 * t
    if prm.j == prm.J:
        checks.append(_check("cor_full_j", rm2t, w))
    elif p <= t * (Fraction(n1, 2) - 1):
        checks.append(_check("cor_small_p", rm2t, w))
    if val > 0:
        ok = prm.j < prm.J and tree
        checks.append(BoundCheck("positive_value_tree", None, val, ok))
        checks.append(_check("positive_value_cap", m2 - 2 * prm.j - d, val))
    if tree and prm.k == 0 and prm.j < prm.J and t >= 2:
        l = sum(1 for e in range(t) if prof.deg1[e] == n1 - 1)
        checks.append(_check("tree_value", m2 - 2 * prm.j - l - prm.j * mu_ - d, val))
    return ComponentBounds(tuple(g.vertices), tuple(range(t)), w, val, d, tree, tuple(checks))


def value_bounds(h: LabeledHypergraph, prm: Params) -> BoundsReport:
    """Per-component bounds plus the global addend for isolated vertices."""
    _require_labels(h)
    comps = []
    for vs, es in h.components():
        g = h.subhypergraph(vs, es)
        cb = component_bounds(g, prm)
        comps.append(ComponentBounds(vs, es, cb.weight, cb.value, cb.defects, cb.is_tree, cb.checks))
    addend = prm.m2 * 2 ** (prm.m2 - 1)
    total = weight_and_value(h, prm).value
    gbound = sum((c.value for c in comps), Fraction(0)) + addend
    return BoundsReport(tuple(comps), _check("global", gbound, total), addend)


# -- partition text format ---------------------------------------------------

def format_partition(p: RegularPartition) -> str:
    lines = ["shape " + " ".join(map(str, p.shape.part_sizes))]
    for c in sorted(p.cells, key=lambda c: sorted(c)):
        lines.append("cell " + " ".join(f"{q}:{i}" for q, i in sorted(c)))
    return "\n".join(lines) + "\n"


def parse_partition(text: str) -> RegularPartition:
    shape, cells = None, []
    for lineno, raw in enumerate(text.split("\n"), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tok = line.split()
        try:
            if tok[0] == "shape":
                shape = MultipartiteShape(tuple(int(x) for x in tok[1:]))
            elif tok[0] == "cell":
                cells.append([tuple(int(y) for y in x.split(":")) for x in tok[1:]])
            else:
                raise FormatError(f"line {lineno}: unknown record {tok[0]!r}")
        except ValueError as exc:
            raise FormatError(f"line {lineno}: {exc}") from exc
    if shape is None:
        raise FormatError("missing shape record")
    return RegularPartition(shape, tuple(cells))
