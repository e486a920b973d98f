"""Exhaustive ground truth for small instances.

Everything here is plain certified search: hypergraphs are generated up to
isomorphism (canonical keys), and every verdict is confirmed with the
automorphism engine.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterator, Optional

import networkx as nx

from .automorphism import automorphisms, canonical_form, default_budget, is_asymmetric
from .errors import BudgetExceeded, TooLarge
from .hypercore import LabeledHypergraph, degree_profile, mu
from .partition import (MultipartiteShape, RegularPartition, format_partition, tau_inverse,
                        tau_prime_inverse, tau_prime_to_tau)

# -- unlabeled generation ------------------------------------------------------


def unlabeled_hypertrees(n1: int, max_edges: int) -> Iterator[LabeledHypergraph]:
    """All n1-uniform hypertrees with 1..max_edges edges, one per isomorphism class.

    Grown edge by edge: a new edge meets the current tree in one vertex of each
    orbit, and duplicates are removed by canonical key.  Output is ordered by
    edge count then canonical key.
    """
    if n1 < 2:
        raise ValueError("n1 must be at least 2")
    level = [LabeledHypergraph.unlabeled(n1, [tuple(range(n1))])]
    t = 1
    while True:
        yield from level
        if t == max_edges:
            return
        found = {}
        for h in level:
            rep = automorphisms(h)
            for orbit in rep.vertex_orbits:
                v = orbit[0]
                n = h.n_vertices
                e = (v,) + tuple(range(n, n + n1 - 1))
                g = LabeledHypergraph.unlabeled(n + n1 - 1, list(h.edges) + [e])
                found.setdefault(canonical_form(g), g)
        level = [found[k] for k in sorted(found)]
        t += 1


def free_trees(n_vertices: int) -> Iterator[LabeledHypergraph]:
    """Ordinary trees on ``n_vertices`` vertices via networkx's generator."""
    if n_vertices == 1:
        yield LabeledHypergraph.unlabeled(1, [])
        return
    for g in nx.nonisomorphic_trees(n_vertices):
        yield LabeledHypergraph.unlabeled(n_vertices, sorted(tuple(sorted(e)) for e in g.edges()))


@dataclass(frozen=True)
class TreeStats:
    n_edges: int
    mu: int
    leaves: int
    group_order: int


def enumerate_small_trees(n1: int, max_edges: int, m2: int = 0, labels: bool = False,
                          predicate=None) -> Iterator[tuple]:
    """Yield ``(hypergraph, stats)`` for every tree class up to ``max_edges``.

    With ``labels`` on, every labelling by subsets of [m2] is produced (up to
    isomorphism) and kept when ``predicate(h)`` is true.
    """
    for u in unlabeled_hypertrees(n1, max_edges):
        prof = degree_profile(u)
        leaves = sum(1 for e in range(u.n_edges) if prof.deg1[e] == n1 - 1)
        stats = TreeStats(u.n_edges, mu(u), leaves, automorphisms(u).group_order)
        if not labels:
            yield u, stats
            continue
        for h in all_labelings(u, m2, predicate):
            yield h, stats


def all_labelings(u: LabeledHypergraph, m2: int, predicate=None) -> Iterator[LabeledHypergraph]:
    """Every 2^[m2] labelling of ``u`` up to label-preserving isomorphism.

    ``predicate`` must be isomorphism invariant; it is applied before deduplication.
    """
    subsets = [tuple(x for x in range(1, m2 + 1) if mask >> (x - 1) & 1) for mask in range(2 ** m2)]
    seen = set()
    for labs in itertools.product(subsets, repeat=u.n_vertices):
        h = LabeledHypergraph(labs, u.edges, m2)
        if predicate is not None and not predicate(h):
            continue
        key = canonical_form(h)
        if key not in seen:
            seen.add(key)
            yield h


def connected_hypergraphs(n1: int, n_edges: int, max_vertices: int) -> Iterator[LabeledHypergraph]:
    """Connected n1-uniform hypergraphs without repeated edges, up to isomorphism."""
    seen = set()
    for nv in range(n1, max_vertices + 1):
        pool = list(itertools.combinations(range(nv), n1))
        for edges in itertools.combinations(pool, n_edges):
            h = LabeledHypergraph.unlabeled(nv, edges)
            if h.isolated_vertices() or not h.is_connected():
                continue
            key = canonical_form(h)
            if key not in seen:
                seen.add(key)
                yield h


# -- distinguishing partitions of arbitrary shapes --------------------------------


@dataclass(frozen=True)
class DistinguishingResult:
    shape: MultipartiteShape
    exists: bool
    witness: Optional[RegularPartition]
    hypergraph: Optional[LabeledHypergraph]
    nodes: int


class _Counter:
    def __init__(self, budget: Optional[int]):
        self.budget = default_budget() if budget is None else budget
        self.nodes = 0

    def tick(self):
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded(f"oracle search exceeded {self.budget} nodes")


def exists_distinguishing(shape: MultipartiteShape, max_vertices: int = 12,
                          budget: Optional[int] = None) -> DistinguishingResult:
    """Search for an asymmetric hypergraph whose edge sizes are the part sizes.

    Vertices are distinct nonzero edge-incidence codes (edge 0 is the most
    significant bit) taken in decreasing order, and equal-size edges must be
    in strictly decreasing lexicographic order.  A doubly lexical ordering of
    the incidence matrix always exists, so this loses no isomorphism class
    while rejecting parallel edges.
    """
    sizes = list(shape.part_sizes)
    m = len(sizes)
    if shape.total > max_vertices:
        raise TooLarge(f"{shape.total} vertices exceeds the bound {max_vertices}")
    counter = _Counter(budget)
    pairs = [(a, b) for a in range(m) for b in range(a + 1, m)
             if sizes[a] == sizes[b] and all(sizes[c] != sizes[a] for c in range(a + 1, b))]
    need = list(sizes)
    cols = []

    def attempt():
        edges = [[ci for ci, c in enumerate(cols) if c >> (m - 1 - i) & 1] for i in range(m)]
        h = LabeledHypergraph.unlabeled(len(cols), edges)
        return h if is_asymmetric(h) else None

    def rec(top, state):
        counter.tick()
        if not any(need):
            if any(st == 0 for st in state):
                return None
            return attempt()
        for mask in range(top, 0, -1):
            if any(mask >> (m - 1 - i) & 1 and need[i] == 0 for i in range(m)):
                continue
            new = list(state)
            ok = True
            for pi, (a, b) in enumerate(pairs):
                if new[pi] == 0:
                    ba, bb = mask >> (m - 1 - a) & 1, mask >> (m - 1 - b) & 1
                    if ba < bb:
                        ok = False
                        break
                    if ba > bb:
                        new[pi] = 1
            if not ok:
                continue
            rows = [i for i in range(m) if mask >> (m - 1 - i) & 1]
            for i in rows:
                need[i] -= 1
            cols.append(mask)
            found = rec(mask - 1, new)
            cols.pop()
            for i in rows:
                need[i] += 1
            if found is not None:
                return found
        return None

    h = rec((1 << m) - 1, [0] * len(pairs)) if m else None
    if m == 0:
        return DistinguishingResult(shape, True, None, None, 0)
    witness = tau_inverse(h) if h is not None else None
    return DistinguishingResult(shape, h is not None, witness, h, counter.nodes)


def ellingham_schroeder_f(n: int) -> int:
    """Threshold number of parts for equipartite graphs with parts of size n >= 2."""
    if n < 2:
        raise ValueError("the threshold is stated for part size n >= 2")
    if n in (2, 14):
        return 6
    if n == 6:
        return 5
    return (n + 1).bit_length() - 1 + 2


# -- exact maximum n2 ----------------------------------------------------------------


def uniform_hypergraphs(m1: int, n1: int, min_vertices: int = 0) -> list:
    """n1-uniform hypergraphs with m1 distinct edges, no isolated vertices, >= min_vertices vertices."""
    slack = m1 * n1 - min_vertices
    if slack < 0:
        return []
    level = {b"": (LabeledHypergraph.unlabeled(0, []), 0)}
    for _ in range(m1):
        nxt = {}
        for h, overlap in level.values():
            n = h.n_vertices
            existing = set(h.edges)
            for a in range(0, min(n1, n, slack - overlap) + 1):
                for shared in itertools.combinations(range(n), a):
                    e = shared + tuple(range(n, n + n1 - a))
                    if e in existing:
                        continue
                    g = LabeledHypergraph.unlabeled(n + n1 - a, list(h.edges) + [e])
                    nxt.setdefault(canonical_form(g), (g, overlap + a))
        level = nxt
    return [level[k][0] for k in sorted(level)]


@dataclass(frozen=True)
class MaxN2Result:
    m1: int
    n1: int
    m2: int
    n2: Optional[int]
    witness: Optional[LabeledHypergraph]
    nodes: int
    searched_from: int


def _labelings_with_counts(h: LabeledHypergraph, m2: int, target: int, counter: _Counter):
    """Yield labelled τ′ forms of ``h`` (plus isolated vertices) with every label class of size ``target``."""
    classes = {}
    for v in h.vertices:
        classes.setdefault(h.vertex_edges[v], []).append(v)
    groups = sorted(classes.values(), key=len, reverse=True)
    universe = [tuple(x for x in range(1, m2 + 1) if mask >> (x - 1) & 1) for mask in range(2 ** m2)]
    half = 2 ** (m2 - 1)
    if any(len(g) > len(universe) for g in groups):
        return
    tail_cap = [0] * (len(groups) + 1)
    for gi in range(len(groups) - 1, -1, -1):
        tail_cap[gi] = tail_cap[gi + 1] + min(len(groups[gi]), half)
    nonempty = universe[1:]
    for r in range(len(nonempty) + 1):
        for iso in itertools.combinations(nonempty, r):
            need = [target - sum(1 for s in iso if x in s) for x in range(1, m2 + 1)]
            if min(need) < 0 or max(need) > tail_cap[0]:
                continue
            labels = [None] * h.n_vertices

            def rec(gi):
                counter.tick()
                if gi == len(groups):
                    if not any(need):
                        yield LabeledHypergraph(tuple(labels) + iso, h.edges, m2)
                    return
                grp = groups[gi]
                for choice in itertools.combinations(universe, len(grp)):
                    delta = [sum(1 for s in choice if x in s) for x in range(1, m2 + 1)]
                    if any(need[i] - delta[i] < 0 or need[i] - delta[i] > tail_cap[gi + 1]
                           for i in range(m2)):
                        continue
                    for i in range(m2):
                        need[i] -= delta[i]
                    for v, lab in zip(grp, choice):
                        labels[v] = lab
                    yield from rec(gi + 1)
                    for i in range(m2):
                        need[i] += delta[i]

            yield from rec(0)


def max_n2(m1: int, n1: int, m2: int, n2_bound: Optional[int] = None,
           budget: Optional[int] = None) -> MaxN2Result:
    """Largest n2 <= n2_bound such that K_{m1(n1), m2(n2)} has a distinguishing partition.

    Descends from the bound; at each n2 every τ′ structure with enough vertices
    and every balanced labelling is tried, and a hit is certified on the full τ.
    """
    if m1 < 1 or n1 < 2 or m2 < 1:
        raise ValueError("needs m1 >= 1, n1 >= 2, m2 >= 1")
    half = 2 ** (m2 - 1)
    top = m1 * n1 + half if n2_bound is None else min(n2_bound, m1 * n1 + half)
    if m1 * n1 > 24:
        raise TooLarge("τ′ structures beyond 24 vertices are out of reach")
    counter = _Counter(budget)
    cache = {}
    for n2 in range(top, 0, -1):
        vmin = max(0, n2 - half)
        if vmin not in cache:
            cache[vmin] = uniform_hypergraphs(m1, n1, vmin)
        for h in cache[vmin]:
            for g in _labelings_with_counts(h, m2, n2, counter):
                if is_asymmetric(tau_prime_to_tau(g)):
                    return MaxN2Result(m1, n1, m2, n2, g, counter.nodes, top)
    return MaxN2Result(m1, n1, m2, None, None, counter.nodes, top)


# -- fixtures ------------------------------------------------------------------------


def fixture_table(triples, budget: Optional[int] = None) -> list:
    rows = []
    for m1, n1, m2 in triples:
        try:
            res = max_n2(m1, n1, m2, budget=budget)
            rows.append({"m1": m1, "n1": n1, "m2": m2, "max_n2": res.n2, "nodes": res.nodes,
                         "status": "ok",
                         "witness": format_partition(tau_prime_inverse(res.witness)[0])
                         if res.witness is not None else None})
        except (BudgetExceeded, TooLarge) as exc:
            rows.append({"m1": m1, "n1": n1, "m2": m2, "max_n2": None, "nodes": None,
                         "status": type(exc).__name__, "witness": None})
    return rows


def write_fixtures(path: str, triples, budget: Optional[int] = None) -> list:
    rows = fixture_table(triples, budget)
    with open(path, "w") as fh:
        json.dump(rows, fh, indent=1)
        fh.write("\n")
    return rows
