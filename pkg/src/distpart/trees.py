"""Counting and enumeration of asymmetric trees.

Counts come from the rooted-tree recurrences for trees whose vertices carry
one of ``a_i`` labels when they have degree ``i``: children of a vertex must
be pairwise non-isomorphic, so each level is a product of (1 + y x^k)^{P_k}.
The T* catalogue lists the positive-value asymmetric labelled hypertrees.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable, Iterator, Optional

import numpy as np

from .automorphism import automorphisms, canonical_form, is_asymmetric
from .errors import (BudgetExceeded, EvenParameter, InsufficientData,
                     NotApplicableCase, NotATree, FormatError)
from .hypercore import (LabeledHypergraph, degree_profile, format_hypergraph,
                        is_tree, mu, parse_hypergraph)
from .oracle import free_trees, unlabeled_hypertrees
from .partition import Params, defects, w_cap, xi

DEFAULT_MAX_EDGES = 24


@dataclass(frozen=True)
class EnrichmentSpec:
    """Vertices of degree ``i`` carry one of ``a[i-1]`` labels; degree above kappa is forbidden."""

    kappa: int
    a: tuple
    a0: int = 0  # labels available to an isolated vertex (1 for plain trees)

    def __post_init__(self):
        if self.kappa < 1 or len(self.a) != self.kappa:
            raise ValueError("need kappa >= 1 and one multiplicity per degree")
        if self.a[0] < 1:
            raise ValueError("a_1 must be at least 1")

    def mult(self, degree: int) -> int:
        if degree == 0:
            return self.a0
        return self.a[degree - 1] if degree <= self.kappa else 0


def plain_spec(max_vertices: int) -> EnrichmentSpec:
    """Ordinary trees: one label per degree, any degree up to the size."""
    k = max(1, max_vertices)
    return EnrichmentSpec(k, (1,) * k, a0=1)


@dataclass(frozen=True)
class CountTable:
    """Exact counts indexed by number of edges (vertices minus one)."""

    species: str
    unrooted: dict
    rooted: dict
    planted: dict = field(default_factory=dict)
    labelled: dict = field(default_factory=dict)

    def series(self, which: str = "unrooted") -> list:
        d = getattr(self, which)
        return [d[i] for i in sorted(d)]


def enriched_counts(spec: EnrichmentSpec, max_vertices: int) -> tuple:
    """Return (planted, rooted, unrooted) count lists indexed by vertex count."""
    N = max_vertices
    cap = min(spec.kappa, N)
    # Q[c][s]: sets of c pairwise distinct planted trees of total size s
    Q = [[0] * (N + 1) for _ in range(cap + 1)]
    Q[0][0] = 1
    P = [0] * (N + 1)
    T = [0] * (N + 1)
    for n in range(1, N + 1):
        P[n] = sum(spec.mult(c + 1) * Q[c][n - 1] for c in range(cap + 1) if c + 1 <= spec.kappa)
        T[n] = sum(spec.mult(c) * Q[c][n - 1] for c in range(cap + 1))
        if P[n]:
            new = [row[:] for row in Q]
            for c in range(cap + 1):
                for s in range(N + 1):
                    if not Q[c][s]:
                        continue
                    for take in range(1, cap - c + 1):
                        if s + take * n > N:
                            break
                        new[c + take][s + take * n] += Q[c][s] * comb(P[n], take)
            Q = new
    U = [0] * (N + 1)
    for n in range(1, N + 1):
        pairs = sum(P[i] * P[n - i] for i in range(1, n))
        if n % 2 == 0:
            pairs += P[n // 2]
        U[n] = T[n] - pairs // 2
    return P, T, U


def count_asymmetric_trees(max_edges: int, spec: Optional[EnrichmentSpec] = None,
                           limit: int = DEFAULT_MAX_EDGES) -> CountTable:
    """Asymmetric trees by edge count: unrooted, vertex-rooted and planted."""
    if max_edges > limit:
        raise BudgetExceeded(f"max_edges {max_edges} above limit {limit}")
    nv = max_edges + 1
    spec = spec or plain_spec(nv)
    P, T, U = enriched_counts(spec, nv)
    name = "a" if spec.a0 == 1 and set(spec.a) == {1} else f"a_F{spec.a}"
    return CountTable(name,
                      {i: U[i + 1] for i in range(max_edges + 1)},
                      {i: T[i + 1] for i in range(max_edges + 1)},
                      {i: P[i + 1] for i in range(max_edges + 1)})


def ordered_forest_counts(rooted_by_vertices: list, n: int) -> list:
    """L_0..L_n for ordered sequences of rooted trees: L = 1 + R·L."""
    L = [1] + [0] * n
    for s in range(1, n + 1):
        L[s] = sum(rooted_by_vertices[i] * L[s - i] for i in range(1, s + 1) if i < len(rooted_by_vertices))
    return L


# -- growth estimate ---------------------------------------------------------


@dataclass(frozen=True)
class GrowthFit:
    beta_hat: float
    alpha_hat: float
    window: tuple
    raw_ratio_var: float
    corrected_ratio_var: float
    residuals: tuple
    ratios_monotone: bool


def estimate_growth(counts, exponent: float = -2.5, min_points: int = 8,
                    start: Optional[int] = None) -> GrowthFit:
    """Fit c_i ~ alpha beta^i i^exponent on the trailing run of positive counts.

    The window is the trailing half of that run unless ``start`` is given.
    beta is the 1/i -> 0 extrapolation of successive ratios; alpha is the
    median of the normalised counts.  Empirical stand-ins only.
    """
    if isinstance(counts, CountTable):
        counts = counts.unrooted
    if not isinstance(counts, dict):
        counts = {i: c for i, c in enumerate(counts)}
    idx = sorted(counts)
    run = []
    for i in reversed(idx):
        if counts[i] > 0 and i > 0 and (not run or run[-1] == i + 1):
            run.append(i)
        else:
            break
    run.reverse()
    if len(run) < min_points:
        raise InsufficientData(f"need {min_points} consecutive positive counts, got {len(run)}")
    if start is None:
        start = run[len(run) // 2] if len(run) // 2 >= min_points else run[0]
    run = [i for i in run if i >= start]
    if len(run) < min_points:
        raise InsufficientData(f"need {min_points} consecutive positive counts, got {len(run)}")
    i = np.array(run[:-1], dtype=float)
    c = np.array([counts[k] for k in run], dtype=float)
    q = c[1:] / c[:-1]
    slope, beta = np.polyfit(1.0 / i, q, 1)
    corrected = q * ((i + 1) / i) ** (-exponent)
    full_i = np.array(run, dtype=float)
    norm = c / (beta ** full_i * full_i ** exponent)
    alpha = float(np.median(norm))
    resid = tuple(float(x) for x in (np.log(c) - np.log(alpha * beta ** full_i * full_i ** exponent)))
    dq = np.diff(q)
    mono = bool(np.all(dq >= -1e-12) or np.all(dq <= 1e-12))
    return GrowthFit(float(beta), alpha, (run[0], run[-1]), float(np.var(q)), float(np.var(corrected)),
                     resid, mono)


# -- enriched trees ---------------------------------------------------------


def _encode(u: LabeledHypergraph, choice) -> LabeledHypergraph:
    m2 = max(choice) + 1 if choice else 1
    return LabeledHypergraph(tuple((x + 1,) for x in choice), u.edges, m2)


def enumerate_enriched(spec: EnrichmentSpec, max_vertices: int) -> tuple:
    """All asymmetric F-enriched trees up to ``max_vertices`` plus their counts.

    Vertex ``v`` of degree ``i`` is encoded with label ``{c+1}`` for its choice
    ``c`` among ``a_i``.  Returns ``(trees, CountTable)``.
    """
    trees = []
    unrooted, rooted = {}, {}
    for n in range(1, max_vertices + 1):
        u_count = Fraction(0)
        r_count = Fraction(0)
        for u in free_trees(n):
            degs = [u.degree(v) for v in u.vertices]
            mults = [spec.mult(d) for d in degs]
            if 0 in mults:
                continue
            aut_u = automorphisms(u).group_order
            seen = set()
            for choice in itertools.product(*[range(m) for m in mults]):
                h = _encode(u, choice)
                rep = automorphisms(h)
                fixed_free = _trivial_stabiliser_count(h, rep)
                r_count += Fraction(fixed_free, aut_u)
                if rep.is_asymmetric:
                    u_count += Fraction(1, aut_u)
                    key = canonical_form(h)
                    if key not in seen:
                        seen.add(key)
                        trees.append(h)
        unrooted[n - 1] = int(u_count)
        rooted[n - 1] = int(r_count)
    return trees, CountTable(f"a_F{spec.a}", unrooted, rooted)


def _trivial_stabiliser_count(h: LabeledHypergraph, rep) -> int:
    """Vertices whose stabiliser in aut(h) is trivial."""
    if rep.is_asymmetric:
        return h.n_vertices
    count = 0
    for orbit in rep.vertex_orbits:
        # stabiliser order = |G| / |orbit|
        if rep.group_order == len(orbit):
            count += len(orbit)
    return count


def labelled_count_formula(i: int, variant: str = "E1+E3") -> int:
    """Labelled trees on i+1 vertices with all degrees in {1, 3}, per-degree multiplicity."""
    if i < 1 or i % 2 == 0:
        raise EvenParameter("i must be odd and positive")
    h = (i - 1) // 2
    base = comb(i + 1, h) * math.factorial(i - 1)
    if variant == "E1+E3":
        return base // 2 ** h
    if variant == "E1+2E3":
        return base
    raise ValueError(f"unknown variant {variant!r}")


def labelled_count_prufer(n_vertices: int, allowed: dict) -> int:
    """Weighted count of labelled trees by Prüfer sequence.

    ``allowed`` maps a degree to its multiplicity; other degrees contribute 0.
    """
    if n_vertices == 1:
        return allowed.get(0, 0)
    if n_vertices == 2:
        return allowed.get(1, 0) ** 2
    total = 0
    for seq in itertools.product(range(n_vertices), repeat=n_vertices - 2):
        deg = [1] * n_vertices
        for x in seq:
            deg[x] += 1
        w = 1
        for d in deg:
            w *= allowed.get(d, 0)
            if not w:
                break
        total += w
    return total


# -- T* catalogue -------------------------------------------------------------


@dataclass(frozen=True)
class TreeCatalogueEntry:
    hypergraph: LabeledHypergraph
    edge_count: int
    value: Fraction
    key: bytes
    xi_class_size: int

    @property
    def edge_value(self) -> Fraction:
        return self.value / self.edge_count

    @property
    def xi_class_representative(self) -> bytes:
        return self.key

    def members(self) -> list:
        """Distinct ξ-images of the representative."""
        out, seen = [], set()
        for p in range(max(1, self.hypergraph.m2)):
            g = xi(self.hypergraph, p)
            k = canonical_form(g)
            if k not in seen:
                seen.add(k)
                out.append(g)
        return out


def xi_class_key(h: LabeledHypergraph) -> tuple:
    """Minimum canonical key over all label rotations, with the rotated hypergraph."""
    best = None
    for p in range(max(1, h.m2)):
        g = xi(h, p)
        k = canonical_form(g)
        if best is None or k < best[0]:
            best = (k, g)
    return best


def _subsets_by_weight(m2: int) -> list:
    subs = [tuple(x for x in range(1, m2 + 1) if mask >> (x - 1) & 1) for mask in range(2 ** m2)]
    return sorted(subs, key=lambda s: (-len(s), s))


def positive_labelings(u: LabeledHypergraph, prm: Params, budget: int = 5_000_000) -> Iterator[LabeledHypergraph]:
    """Labelings of tree ``u`` with value > 0 and no twin pair (branch and bound).

    Degree-1 vertices of one edge are twins in ``u``; they receive a strictly
    decreasing run of labels so that each multiset is produced once.
    """
    m2 = prm.m2
    t = u.n_edges
    threshold = prm.r * m2 * t  # need weight strictly above this
    subs = _subsets_by_weight(m2)
    rank = {s: i for i, s in enumerate(subs)}
    groups = []
    inner = [v for v in u.vertices if u.degree(v) >= 2]
    for v in inner:
        groups.append(("inner", (v,)))
    for ei, e in enumerate(u.edges):
        leafs = tuple(v for v in e if u.degree(v) == 1)
        if leafs:
            if len(leafs) > 2 ** m2:
                return
            groups.append(("twins", leafs))
    caps = [m2 if kind == "inner" else w_cap(len(vs), m2) for kind, vs in groups]
    suffix = [0] * (len(groups) + 1)
    for g in range(len(groups) - 1, -1, -1):
        suffix[g] = suffix[g + 1] + caps[g]
    labels = [None] * u.n_vertices
    nodes = [0]

    def rec(g, w):
        nodes[0] += 1
        if nodes[0] > budget:
            raise BudgetExceeded("labelling search budget exhausted")
        if w + suffix[g] <= threshold:
            return
        if g == len(groups):
            yield LabeledHypergraph(tuple(labels), u.edges, m2)
            return
        kind, vs = groups[g]
        if kind == "inner":
            for s in subs:
                labels[vs[0]] = s
                yield from rec(g + 1, w + len(s))
            return
        for combo in itertools.combinations(range(len(subs)), len(vs)):
            for v, ix in zip(vs, combo):
                labels[v] = subs[ix]
            yield from rec(g + 1, w + sum(len(subs[ix]) for ix in combo))

    yield from rec(0, 0)


def tree_value_cutoff(u: LabeledHypergraph, prm: Params) -> Optional[int]:
    """Structural value cap for k = 0 trees with at least two edges, else None."""
    if prm.k != 0 or u.n_edges < 2 or prm.j >= prm.J:
        return None
    prof = degree_profile(u)
    l = sum(1 for e in range(u.n_edges) if prof.deg1[e] == u.uniformity() - 1)
    return prm.m2 - 2 * prm.j - l - prm.j * mu(u)


def build_T_star(prm: Params, max_edges: int, prune: bool = True,
                 budget: int = 5_000_000) -> list:
    """Positive-value asymmetric labelled trees up to ``max_edges``, one per ξ-class.

    Sorted by edge value descending, then representative key ascending.
    """
    if prm.j >= prm.J:
        return []
    classes = {}
    for u in unlabeled_hypertrees(prm.n1, max_edges):
        if prune:
            cut = tree_value_cutoff(u, prm)
            if cut is not None and cut <= 0:
                continue
        for h in positive_labelings(u, prm, budget):
            if not is_asymmetric(h):
                continue
            key, rep = xi_class_key(h)
            if key in classes:
                continue
            w = sum(h.weight(v) for v in h.vertices)
            value = w - prm.r * prm.m2 * h.n_edges
            size = len({canonical_form(xi(h, p)) for p in range(max(1, prm.m2))})
            classes[key] = TreeCatalogueEntry(rep, h.n_edges, value, key, size)
    return sorted(classes.values(), key=lambda e: (-e.edge_value, e.key))


def format_catalogue(entries) -> str:
    out = []
    for e in entries:
        v = e.value
        out.append(f"{e.key.hex()} {e.edge_count} {v.numerator}/{v.denominator}")
        out.extend("  " + line for line in format_hypergraph(e.hypergraph).splitlines())
    return "\n".join(out) + ("\n" if out else "")


def parse_catalogue(text: str) -> list:
    """Return ``(key, t, value, hypergraph)`` tuples from a catalogue dump."""
    rows, cur, block = [], None, []

    def flush():
        if cur is not None:
            rows.append(cur + (parse_hypergraph("\n".join(block)),))

    for line in text.splitlines():
        if not line.strip():
            continue
        if line.startswith("  "):
            block.append(line.strip())
            continue
        flush()
        tok = line.split()
        if len(tok) != 3:
            raise FormatError(f"bad catalogue header: {line!r}")
        cur = (bytes.fromhex(tok[0]), int(tok[1]), Fraction(tok[2]))
        block = []
    flush()
    return rows


# -- c(G) and c'(G) -----------------------------------------------------------


@dataclass(frozen=True)
class CGraph:
    nodes: tuple  # ("e", edge id) or ("v", vertex id)
    colors: dict
    edges: tuple
    contracted_nodes: tuple
    contracted_edges: tuple  # (a, b, length)
    defects: int

    def degree(self, node) -> int:
        return sum(1 for a, b in self.edges if node in (a, b))

    def contracted_degree(self, node) -> int:
        return sum((a == node) + (b == node) for a, b, _ in self.contracted_edges)


def c_graph(g: LabeledHypergraph, prm: Params) -> CGraph:
    """Edge/vertex containment graph coloured by defects, and its segment contraction."""
    if g.uniformity() is None or not is_tree(g):
        raise NotATree("c_graph needs a tree")
    dr = defects(g, prm)
    nodes = [("e", i) for i in range(g.n_edges)] + [("v", v) for v in g.vertices if g.degree(v) >= 2]
    colors = {}
    for nd in nodes:
        kind, x = nd
        if kind == "e":
            colors[nd] = "red" if x in dr.defective_edges else "blue"
        elif x in dr.defective_vertices:
            colors[nd] = "red"
        elif g.degree(x) >= 3:
            colors[nd] = "green"
        else:
            colors[nd] = "blue"
    edges = [(("v", v), ("e", ei)) for ei, e in enumerate(g.edges) for v in e if g.degree(v) >= 2]
    adj = {nd: [] for nd in nodes}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    keep = [nd for nd in nodes if not (colors[nd] == "blue" and len(adj[nd]) == 2)]
    if not keep:
        keep = [nodes[0]]
    keepset = set(keep)
    cedges, used = [], set()
    for s in keep:
        for nb in adj[s]:
            if (s, nb) in used:
                continue
            prev, cur, length = s, nb, 1
            used.add((s, nb))
            while cur not in keepset:
                nxt = adj[cur][0] if adj[cur][0] != prev else adj[cur][1]
                prev, cur = cur, nxt
                length += 1
            used.add((cur, prev))
            cedges.append((s, cur, length))
    return CGraph(tuple(nodes), colors, tuple(edges), tuple(keep), tuple(cedges), dr.total)


# -- constants ---------------------------------------------------------------


@dataclass(frozen=True)
class TheoremConstants:
    C: Optional[Fraction]
    C_case: Optional[str]
    z: Optional[int]
    epsilon_form: str


def constant_C(n1: int, m2: int) -> tuple:
    from .partition import params as _params
    prm = _params(n1, m2)
    j = prm.j
    if prm.k != 0 or j < 0 or j >= prm.J:
        raise NotApplicableCase("C is defined for k = 0 and 0 <= j < floor((m2-1)/2)")
    if 2 * j == m2 - 3:
        b = comb(m2, j + 1)
        return Fraction(b * (b - 1), 2), "path"
    if j == 0:
        return Fraction(m2 ** (m2 - 1) * comb(2 * m2 - 4, m2 - 3), math.factorial(2 * m2 - 4)), "j0"
    return constant_C_general(m2, j), "general"


def constant_C_general(m2: int, j: int) -> Fraction:
    e = 2 * m2 - 4 * j - 4
    num = comb(m2, j + 1) ** (m2 - 2 * j - 1) * comb(m2, j) ** (m2 - 2 * j - 3) * comb(e, m2 - 2 * j - 3)
    return Fraction(num, math.factorial(e)) * Fraction(2) ** (-m2 + 2 * j + 3)


def z_value(m1: int, alpha: float, beta: float) -> int:
    lb = math.log(m1, beta)
    return math.floor(math.log(m1 * (beta - 1) / (alpha * beta) * lb ** 1.5, beta))


def theorem_constants(n1: int, m2: int, m1: Optional[int] = None,
                      alpha: Optional[float] = None, beta: Optional[float] = None) -> TheoremConstants:
    from .partition import params as _params
    prm = _params(n1, m2)
    C = case = None
    if prm.k == 0 and 0 <= prm.j < prm.J:
        C, case = constant_C(n1, m2)
    z = None
    if m1 is not None and alpha is not None and beta is not None:
        z = z_value(m1, alpha, beta)
    if n1 == 2:
        form = "m1/log_beta(m1)"
    elif prm.k == 0 and prm.j < prm.J:
        e = 2 * m2 - 4 * prm.j - 4
        form = f"m1^({e - 1}/{e})"
    elif prm.j < prm.J:
        form = "Theta(m1/log m1)"
    elif prm.k == 0:
        form = "2^(m2-1)" if m2 % 2 == 0 and m2 > 2 else "2^(m2-1)-1"
    else:
        form = "2^(m2-1)-1 if k*m1 even and m2 odd, else 2^(m2-1)+floor(r*m1)-r*m1"
    return TheoremConstants(C, case, z, form)
