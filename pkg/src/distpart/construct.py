"""Explicit constructions of asymmetric labelled hypergraphs (τ′ form).

Every builder returns either a bare hypergraph or a ``ConstructionReport``
whose certificate is the automorphism group of the full τ, i.e. with the
m2 label classes turned back into edges.  A construction is only accepted
when that group is trivial.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Optional, Sequence

import networkx as nx

from .automorphism import AutomorphismReport, automorphisms, is_asymmetric
from .errors import (BadPartition, CatalogueExhausted, NoTail, ParityViolation,
                     PreconditionError, RetriesExhausted, TooFewEdges, TooSmallM1,
                     WrongCase)
from .hypercore import LabeledHypergraph, disjoint_union, label_counts
from .partition import Params, params, tau_prime_to_tau, weight_and_value


def full_labels(m2: int) -> tuple:
    return tuple(range(1, m2 + 1))


def labels_of_size_at_least(m2: int, size: int) -> list:
    """All subsets of [m2] with at least ``size`` elements, heaviest first, then lexicographic."""
    out = []
    for s in range(m2, max(size, 0) - 1, -1):
        out.extend(itertools.combinations(range(1, m2 + 1), s))
    return out


def shift_label(lab, i: int, m2: int) -> tuple:
    return tuple(sorted((x - 1 + i) % m2 + 1 for x in lab))


def isolated_nonempty(m2: int) -> list:
    """One label per nonempty subset of [m2]."""
    return [s for s in labels_of_size_at_least(m2, 1)]


# -- certificates and reports ------------------------------------------------


def certify(h: LabeledHypergraph, budget: Optional[int] = None) -> AutomorphismReport:
    """Automorphism group of the full τ built from the τ′-form ``h``."""
    return automorphisms(tau_prime_to_tau(h), budget)


@dataclass(frozen=True)
class ConstructionReport:
    hypergraph: LabeledHypergraph
    n2: Fraction
    certificate: AutomorphismReport
    component_values: tuple
    balance: dict
    seed: Optional[int] = None
    notes: dict = field(default_factory=dict)

    @property
    def balanced(self) -> bool:
        return len(set(self.balance.values())) <= 1

    @property
    def accepted(self) -> bool:
        return self.certificate.is_asymmetric and self.balanced and self.n2.denominator == 1


def make_report(h: LabeledHypergraph, prm: Params, seed: Optional[int] = None,
                notes: Optional[dict] = None, require: bool = True) -> ConstructionReport:
    wr = weight_and_value(h, prm)
    cert = certify(h)
    rep = ConstructionReport(h, wr.implied_n2, cert,
                             tuple((len(c.edges), c.value) for c in wr.components),
                             dict(label_counts(h)), seed, dict(notes or {}))
    if require and not rep.accepted:
        raise PreconditionError(
            f"construction rejected: group_order={cert.group_order} balanced={rep.balanced} n2={wr.implied_n2}")
    return rep


class _Builder:
    """Incremental τ′-form hypergraph assembly."""

    def __init__(self, m2: int):
        self.m2 = m2
        self.labels = []
        self.edges = []

    def vertex(self, label) -> int:
        self.labels.append(tuple(label))
        return len(self.labels) - 1

    def edge(self, vs):
        self.edges.append(tuple(vs))

    def build(self) -> LabeledHypergraph:
        return LabeledHypergraph(tuple(self.labels), tuple(self.edges), self.m2)


# -- symmetry breaking ring -------------------------------------------------------


@dataclass(frozen=True)
class RingSpec:
    n1: int
    m2: int
    edge_count: int

    @property
    def min_R(self) -> int:
        return min_ring_edges(self.n1, self.m2)

    @property
    def quot_R(self) -> int:
        return self.edge_count - self.edge_count % self.m2


def min_ring_edges(n1: int, m2: int) -> int:
    return 6 if m2 == 1 else max(2 * m2, n1 + 1)


def ring_omega(n1: int, m2: int) -> Fraction:
    """Lower bound on the value of any ring."""
    if m2 == 1:
        return Fraction(-3)
    return -m2 * m2 * params(n1, m2).r - 2 * m2


def build_ring(spec: RingSpec) -> LabeledHypergraph:
    n1, m2, E = spec.n1, spec.m2, spec.edge_count
    if E < spec.min_R:
        raise TooFewEdges(f"ring needs at least {spec.min_R} edges, got {E}")
    b = _Builder(m2)
    if m2 == 1:
        if n1 != 2:
            raise PreconditionError("the m2 = 1 ring is 2-uniform")
        vs = [b.vertex(() if i in (0, 1, 3) else (1,)) for i in range(E)]
        for i in range(E):
            b.edge((vs[i], vs[(i + 1) % E]))
        return b.build()
    prm = params(n1, m2)
    q = spec.quot_R
    extra = E - q
    if extra and n1 > q:
        raise TooFewEdges(f"trailing ring edges need n1 <= quot_R ({n1} > {q})")
    base = labels_of_size_at_least(m2, m2 - prm.j)
    if prm.k:
        base += list(itertools.combinations(range(1, m2 + 1), m2 - prm.j - 1))[:prm.k]
    ring = []
    for i in range(q):
        if i == 0:
            lab = ()
        elif i <= m2:
            lab = tuple(x for x in range(1, m2 + 1) if x != i)
        else:
            lab = full_labels(m2)
        ring.append(b.vertex(lab))
    for i in range(q):
        leafs = [b.vertex(shift_label(lab, i, m2)) for lab in base]
        b.edge([ring[i], ring[(i + 1) % q]] + leafs)
    for i in range(1, extra + 1):
        if n1 == 2:
            # a window of two consecutive ring vertices would repeat e_i
            b.edge((ring[i], ring[(i + 2) % q]))
        else:
            b.edge([ring[(i + a) % q] for a in range(n1)])
    return b.build()


# -- the extremal Δ ---------------------------------------------------------------


def _tree_value_cap(prm: Params) -> int:
    return prm.m2 - 2 * prm.j - 2 if prm.k == 0 else prm.m2 - 2 * prm.j


def build_delta(m1: int, n1: int, m2: int, max_edges: int = 8, catalogue=None) -> ConstructionReport:
    """Greedy prefix of the T* classes plus one ring and the isolated labels."""
    from .trees import build_T_star

    prm = params(n1, m2)
    if prm.j >= prm.J:
        raise PreconditionError("the Δ construction needs j < floor((m2-1)/2)")
    min_R = min_ring_edges(n1, m2)
    if m1 < min_R:
        raise TooSmallM1(f"m1={m1} cannot hold a ring of {min_R} edges")
    cat = build_T_star(prm, max_edges) if catalogue is None else catalogue
    room = m1 - min_R
    used, chosen, pos = 0, [], 0
    while pos < len(cat):
        members = cat[pos].members()
        size = sum(g.n_edges for g in members)
        if used + size > room:
            break
        chosen.extend(members)
        used += size
        pos += 1
    cap = Fraction(_tree_value_cap(prm), max_edges + 1)
    if pos == len(cat):
        raise CatalogueExhausted(f"catalogue up to {max_edges} edges used up before m1={m1} was filled")
    if chosen and min(cat[i].edge_value for i in range(pos)) < cap:
        raise CatalogueExhausted("trees beyond max_edges could outrank included classes")
    ring = build_ring(RingSpec(n1, m2, m1 - used))
    iso = LabeledHypergraph(tuple(isolated_nonempty(m2)), (), m2)
    h = disjoint_union(chosen + [ring, iso], m2)
    next_value = cat[pos].edge_value
    error = m2 * m2 + min_R * next_value - ring_omega(n1, m2)
    return make_report(h, prm, notes={"classes": pos, "tree_edges": used, "ring_edges": m1 - used,
                                      "next_edge_value": next_value, "error_bound": error})


# -- tails --------------------------------------------------------------------------


def find_tails(h: LabeledHypergraph) -> list:
    """All tails as vertex sequences ``v_1..v_{n1+t-1}`` (any t >= 1).

    Consecutive windows of n1 vertices are edges, and the vertices from
    position n1 on lie in no other edge and carry label ∅.
    """
    n1 = h.uniformity()
    if n1 is None:
        raise PreconditionError("tails need an n1-uniform hypergraph")
    edge_set = {}
    for ei, e in enumerate(h.edges):
        edge_set.setdefault(frozenset(e), ei)
    out = []

    def private_ok(seq, windows):
        for v in seq[n1 - 1:]:
            if h.labels[v] != ():
                return False
            if not set(h.vertex_edges[v]) <= windows:
                return False
        return True

    def grow(seq, windows):
        if private_ok(seq, windows):
            out.append(tuple(seq))
        t = len(windows)
        last = seq[t - 1:]  # current window v_t..v_{n1+t-1}
        depart = seq[t - 1]
        rest = set(last) - {depart}
        for ei in sorted(set().union(*(h.vertex_edges[v] for v in rest)) if rest else set()):
            e = set(h.edges[ei])
            if ei in windows or not rest <= e:
                continue
            new = e - rest
            if len(new) != 1:
                continue
            x = new.pop()
            if x in seq:
                continue
            grow(seq + [x], windows | {ei})

    for ei, e in enumerate(h.edges):
        for last in e:
            others = [v for v in e if v != last]
            orders = itertools.permutations(others) if n1 <= 4 else [tuple(others)] + [
                tuple([o] + [v for v in others if v != o]) for o in others[1:]]
            for order in orders:
                grow(list(order) + [last], frozenset([ei]))
    return out


def extend_tail(h: LabeledHypergraph) -> LabeledHypergraph:
    """Append one edge to a maximum tail; the result is certified asymmetric."""
    if not certify(h).is_asymmetric:
        raise PreconditionError("extend_tail needs an asymmetric input")
    tails = find_tails(h)
    if not tails:
        raise NoTail("no tail found")
    n1 = h.uniformity()
    best = max(len(t) for t in tails)
    for seq in sorted(t for t in tails if len(t) == best):
        t = len(seq) - n1 + 1
        labels = list(h.labels) + [()]
        new = len(labels) - 1
        g = LabeledHypergraph(tuple(labels), tuple(h.edges) + (tuple(seq[t:]) + (new,),), h.m2)
        if certify(g).is_asymmetric:
            return g
    raise NoTail("no maximum tail extension was asymmetric")


# -- exact families for k = 0, j = floor((m2-1)/2) ----------------------------------


def _chain(b: _Builder, t: int, leaf_labels: list, first_extra, last_extra, joint_labels) -> None:
    """Linear chain of t edges; consecutive edges share one vertex."""
    joints = [b.vertex(joint_labels(a)) for a in range(1, t)]
    for a in range(t):
        vs = []
        if a > 0:
            vs.append(joints[a - 1])
        if a < t - 1:
            vs.append(joints[a])
        vs.extend(b.vertex(lab) for lab in leaf_labels(a))
        if a == 0:
            vs.extend(b.vertex(lab) for lab in first_extra)
        if a == t - 1:
            vs.extend(b.vertex(lab) for lab in last_extra)
        b.edge(vs)


def default_t_partition(m1: int, m2: int) -> tuple:
    parts = list(range(1, m2))
    last = m1 - sum(parts)
    if last <= (parts[-1] if parts else 0):
        raise BadPartition(f"m1={m1} too small for {m2} distinct chain lengths")
    return tuple(parts + [last])


def build_even_m2_chains(m1: int, n1: int, m2: int, t_partition: Optional[Sequence[int]] = None
                         ) -> ConstructionReport:
    prm = params(n1, m2)
    if m2 % 2 or m2 < 4 or prm.k != 0 or prm.j != prm.J:
        raise PreconditionError("needs even m2 >= 4, k = 0 and j = floor((m2-1)/2)")
    ts = tuple(default_t_partition(m1, m2) if t_partition is None else t_partition)
    if len(ts) != m2 or len(set(ts)) != m2 or sum(ts) != m1 or min(ts) < 1:
        raise BadPartition(f"need {m2} distinct positive lengths summing to {m1}, got {ts}")
    j = prm.j
    base = labels_of_size_at_least(m2, m2 - j)
    b = _Builder(m2)
    full = full_labels(m2)
    for i, t in enumerate(ts, start=1):
        u1 = tuple(sorted((i - 1 + a) % m2 + 1 for a in range(j + 1)))
        u2 = tuple(sorted((i - 1 - a) % m2 + 1 for a in range(j + 1)))
        _chain(b, t, lambda a: base, [u1], [u2], lambda a: full)
    for lab in isolated_nonempty(m2):
        b.vertex(lab)
    return make_report(b.build(), prm, notes={"t_partition": ts})


def build_m2_2_chain(m1: int, n1: int = 3) -> ConstructionReport:
    if n1 != 3:
        raise PreconditionError("the m2 = 2 chain needs n1 = 3")
    if m1 < 5:
        raise TooFewEdges("the m2 = 2 chain needs at least five edges")
    prm = params(3, 2)
    b = _Builder(2)

    def joint(a):
        return {1: (1,), 2: (2,)}.get(a, (1, 2))

    _chain(b, m1, lambda a: [(1, 2)], [(1,)], [(2,)], joint)
    for lab in isolated_nonempty(2):
        b.vertex(lab)
    return make_report(b.build(), prm)


def build_odd_m2_cycle(m1: int, n1: int, m2: int) -> ConstructionReport:
    prm = params(n1, m2)
    if m2 % 2 == 0 or m2 < 3 or prm.k != 0 or prm.j != prm.J:
        raise PreconditionError("needs odd m2 >= 3, k = 0 and j = floor((m2-1)/2)")
    if m1 < m2 + 3:
        raise TooFewEdges(f"the cycle needs m1 >= {m2 + 3}")
    base = labels_of_size_at_least(m2, m2 - prm.j)
    b = _Builder(m2)

    def joint(a):
        if 1 <= a <= m2 - 1:
            return tuple(x for x in range(1, m2 + 1) if x != a)
        if a == m2 + 1:
            return tuple(range(1, m2))
        return full_labels(m2)

    joints = [b.vertex(joint(a)) for a in range(1, m1 + 1)]  # v_a = e_a ∩ e_{a+1}
    for a in range(1, m1 + 1):
        prev = joints[(a - 2) % m1]
        vs = [prev, joints[a - 1]] + [b.vertex(lab) for lab in base]
        b.edge(vs)
    for lab in isolated_nonempty(m2):
        b.vertex(lab)
    return make_report(b.build(), prm)


# -- regular asymmetric hypergraphs ------------------------------------------------------


def _asymmetric_graph(g: nx.Graph) -> bool:
    nodes = sorted(g.nodes())
    idx = {v: i for i, v in enumerate(nodes)}
    h = LabeledHypergraph.unlabeled(len(nodes), [(idx[a], idx[b]) for a, b in g.edges()])
    return is_asymmetric(h)


def _regular_minus_edge(s: int, size: int, rng: random.Random, retries: int) -> nx.Graph:
    for _ in range(retries):
        g = nx.random_regular_graph(s, size, seed=rng.randrange(2 ** 31))
        if not nx.is_connected(g):
            continue
        edges = sorted(g.edges())
        a, b = edges[rng.randrange(len(edges))]
        g.remove_edge(a, b)
        if _asymmetric_graph(g):
            return g
    raise RetriesExhausted(f"no asymmetric {s}-regular graph minus an edge on {size} vertices")


def _distinct_sizes(total: int, count: int, s: int) -> list:
    """``count`` distinct sizes summing to ``total``; even when s is odd."""
    step = 2 if s % 2 else 1
    lo = 2 * s + 2  # smaller components are rarely asymmetric after removing an edge
    sizes = [lo + step * i for i in range(count - 1)]
    last = total - sum(sizes)
    if count == 1:
        sizes, last = [], total
    if (s * last) % 2:
        raise ParityViolation(f"s*{last} is odd")
    if last <= (sizes[-1] if sizes else 0):
        raise TooFewEdges(f"cannot split {total} into {count} distinct sizes of at least {lo}")
    # move mass towards the middle for more room to be asymmetric
    sizes.append(last)
    while True:
        moved = False
        for i in range(len(sizes) - 1):
            if sizes[-1] - step > sizes[-2] + step and sizes[i] + step < sizes[i + 1] and \
                    sizes[i] + step not in sizes:
                sizes[i] += step
                sizes[-1] -= step
                moved = True
        if not moved or sizes[-1] - sizes[-2] <= 2 * step:
            break
    return sorted(sizes)


def asymmetric_graph(psi: int, s: int, t: int, seed: int = 0, retries: int = 200) -> nx.Graph:
    """A graph on t vertices, degrees s except psi vertices of degree s-1, trivial group."""
    if (s * t - psi) % 2:
        raise ParityViolation("s*t - psi must be even")
    rng = random.Random(seed)
    if psi == 0:
        for _ in range(retries):
            g = nx.random_regular_graph(s, t, seed=rng.randrange(2 ** 31))
            if nx.is_connected(g) and _asymmetric_graph(g):
                return g
        raise RetriesExhausted(f"no asymmetric {s}-regular graph on {t} vertices")
    if (s * t) % 2 == 0:
        sizes = _distinct_sizes(t, psi // 2, s)
        for _ in range(retries):
            parts = [_regular_minus_edge(s, n, rng, retries) for n in sizes]
            g = nx.disjoint_union_all(parts)
            if _asymmetric_graph(g):
                return g
        raise RetriesExhausted("component union was never asymmetric")
    inner = asymmetric_graph(psi * (s - 1), s, t - psi, rng.randrange(2 ** 31), retries)
    for _ in range(retries):
        deficient = sorted(v for v in inner.nodes() if inner.degree(v) == s - 1)
        rng.shuffle(deficient)
        g = inner.copy()
        base = max(g.nodes()) + 1
        for a in range(psi):
            for u in deficient[a * (s - 1):(a + 1) * (s - 1)]:
                g.add_edge(base + a, u)
        if _asymmetric_graph(g):
            return nx.convert_node_labels_to_integers(g, ordering="sorted")
    raise RetriesExhausted("surgery never produced an asymmetric graph")


def dual_padded(g: nx.Graph, n1: int) -> tuple:
    """Vertices of g become edges; each edge of g becomes a shared vertex; pad to n1.

    Returns ``(hypergraph, edge_of_node, shared_vertex_of_graph_edge)``.
    """
    nodes = sorted(g.nodes())
    gedges = sorted(tuple(sorted(e)) for e in g.edges())
    vid = {e: i for i, e in enumerate(gedges)}
    n = len(gedges)
    edges = []
    for v in nodes:
        inc = [vid[tuple(sorted((v, u)))] for u in sorted(g.neighbors(v))]
        pad = list(range(n, n + n1 - len(inc)))
        n += len(pad)
        edges.append(inc + pad)
    h = LabeledHypergraph.unlabeled(n, edges)
    return h, {v: i for i, v in enumerate(nodes)}, vid


def build_regular_asymmetric(psi: int, s: int, t: int, n1: int, seed: int = 0,
                             t_floor: Optional[int] = None, retries: int = 200) -> LabeledHypergraph:
    """An unlabeled (psi, s, t, n1)-regular hypergraph whose automorphisms fix every edge."""
    if s < 3 or n1 < s:
        raise PreconditionError("needs s >= 3 and n1 >= s")
    if (s * t - psi) % 2:
        raise ParityViolation("s*t - psi must be even")
    floor = 3 * s + 4 if t_floor is None else t_floor
    if t < floor:
        raise PreconditionError(f"t={t} below the configured floor {floor}")
    g = asymmetric_graph(psi, s, t, seed, retries)
    h, _, _ = dual_padded(g, n1)
    rep = automorphisms(h)
    if any(list(em) != list(range(h.n_edges)) for _, em in rep.generators):
        raise RetriesExhausted("dual hypergraph has an edge-moving automorphism")
    return h


def _k1_case(k: int, m1: int, m2: int) -> str:
    return ("even" if k * m1 % 2 == 0 else "odd") + "/" + ("even" if m2 % 2 == 0 else "odd")


def build_k1_jlarge(m1: int, n1: int, m2: int, seed: int = 0, case: Optional[str] = None,
                    t_floor: Optional[int] = None, retries: int = 50) -> ConstructionReport:
    prm = params(n1, m2)
    if prm.k < 1 or prm.j != prm.J:
        raise PreconditionError("needs k >= 1 and j = floor((m2-1)/2)")
    actual = _k1_case(prm.k, m1, m2)
    if case is not None and case != actual:
        raise WrongCase(f"(k*m1, m2) parity is {actual}, not {case}")
    s = prm.k + 2
    psi = {"even/even": m2, "even/odd": 0, "odd/even": m2 + 1, "odd/odd": m2}[actual]
    base = labels_of_size_at_least(m2, m2 - prm.j)
    full = full_labels(m2)
    size = m2 - prm.j - 1
    rng = random.Random(seed)
    for attempt in range(retries):
        sub_seed = rng.randrange(2 ** 31)
        try:
            g = asymmetric_graph(psi, s, m1, sub_seed)
        except RetriesExhausted:
            continue
        h, edge_of, shared_of = dual_padded(g, n1)
        labels = [full] * h.n_vertices
        special = sorted(edge_of[v] for v in g.nodes() if g.degree(v) == s - 1)
        extra = {}
        if actual in ("even/even", "odd/odd"):
            for i, e in enumerate(special, start=1):
                extra[e] = [tuple(sorted((i - 1 + a) % m2 + 1 for a in range(size)))]
        elif actual == "odd/even":
            for i, e in enumerate(special[:m2], start=1):
                extra[e] = [tuple(sorted((i - 1 + a) % m2 + 1 for a in range(size)))]
            extra[special[m2]] = [()]
        for ei, e in enumerate(h.edges):
            pads = [v for v in e if h.degree(v) == 1]
            labs = base + extra.get(ei, [])
            for v, lab in zip(pads, labs):
                labels[v] = lab
        if actual == "even/odd":
            shared = sorted(shared_of.values())
            picks = rng.sample(shared, m2)
            for i, v in enumerate(picks, start=1):
                labels[v] = tuple(x for x in full if x != i)
        b = _Builder(m2)
        b.labels = list(labels) + list(isolated_nonempty(m2))
        b.edges = list(h.edges)
        rep = make_report(b.build(), prm, seed=sub_seed, notes={"case": actual, "psi": psi},
                          require=False)
        if rep.accepted:
            return rep
    raise RetriesExhausted(f"no certified {actual} instance after {retries} attempts")


def expected_k1_offset(k: int, m1: int, m2: int) -> Fraction:
    """n2 - r*m1 achieved by the four parity cases."""
    c = _k1_case(k, m1, m2)
    top = Fraction(2 ** (m2 - 1))
    return {"even/even": top, "even/odd": top - 1, "odd/even": top - Fraction(1, 2),
            "odd/odd": top - Fraction(1, 2)}[c]
