"""Command-line entry point: ``distpart <command> ...``.

Exit status is 0 on success, 1 on a domain error and 2 when a search
budget runs out.  Every random choice is driven by ``--seed``.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import construct as cons
from .automorphism import automorphisms
from .errors import BudgetExceeded, DistpartError
from .hypercore import format_hypergraph, parse_hypergraph
from .oracle import exists_distinguishing, max_n2, write_fixtures
from .partition import (MultipartiteShape, format_partition, params, parse_partition, tau,
                        tau_inverse, tau_prime, tau_prime_inverse, tau_prime_to_tau, value_bounds)
from .trees import (EnrichmentSpec, build_T_star, count_asymmetric_trees, enumerate_enriched,
                    estimate_growth, format_catalogue, theorem_constants)


def frac(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


class Out:
    """Collects records and renders them as text or JSON lines."""

    def __init__(self, fmt: str, stream=None):
        self.fmt = fmt
        self.stream = stream or sys.stdout

    def text(self, s: str):
        if self.fmt == "text":
            self.stream.write(s if s.endswith("\n") else s + "\n")

    def record(self, kind: str, text: str = None, **fields):
        if self.fmt == "json-lines":
            payload = {"kind": kind}
            payload.update({k: (frac(v) if isinstance(v, Fraction) else v) for k, v in fields.items()})
            self.stream.write(json.dumps(payload, sort_keys=True) + "\n")
        elif text is not None:
            self.text(text)

    def hypergraph(self, h):
        self.record("hypergraph", format_hypergraph(h).rstrip("\n"), text_format=format_hypergraph(h))


def read_input(path):
    if path in (None, "-"):
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def parse_spec(text: str) -> EnrichmentSpec:
    """``a1,a2,...`` with optional ``;a0=N``."""
    a0 = 0
    if ";" in text:
        text, extra = text.split(";", 1)
        a0 = int(extra.split("=", 1)[1])
    a = tuple(int(x) for x in text.split(",") if x)
    return EnrichmentSpec(len(a), a, a0)


# -- commands ------------------------------------------------------------------------


def cmd_params(args, out):
    prm = params(args.n1, args.m2)
    out.record("params", str(prm), n1=prm.n1, m2=prm.m2, j=prm.j, k=prm.k, r=prm.r)


def cmd_tau(args, out):
    text = read_input(args.input)
    if args.inverse:
        p = tau_inverse(parse_hypergraph(text))
        out.record("partition", format_partition(p).rstrip("\n"), text_format=format_partition(p))
    else:
        out.hypergraph(tau(parse_partition(text)))


def cmd_tau_prime(args, out):
    text = read_input(args.input)
    if args.inverse:
        p, parts = tau_prime_inverse(parse_hypergraph(text))
        out.record("partition", format_partition(p).rstrip("\n"), text_format=format_partition(p),
                   m2_parts=parts)
        out.text("m2-parts " + " ".join(map(str, parts)))
    else:
        parts = [int(x) for x in args.m2_parts.split(",")]
        out.hypergraph(tau_prime(parse_partition(text), parts))


def cmd_verify(args, out):
    h = parse_hypergraph(read_input(args.input))
    full = h.m2 > 0 and all(lab is not None for lab in h.labels) and not args.label_preserving
    rep = automorphisms(tau_prime_to_tau(h) if full else h)
    status = "ok" if rep.is_asymmetric else "fail"
    out.record("certificate", f"cert {status} group_order={rep.group_order}",
               asymmetric=rep.is_asymmetric, group_order=rep.group_order, full_tau=full)
    return 0 if rep.is_asymmetric else 1


def cmd_bounds(args, out):
    h = parse_hypergraph(read_input(args.input))
    n1 = args.n1 or h.uniformity()
    prm = params(n1, h.m2)
    rep = value_bounds(h, prm)
    for ci, cb in enumerate(rep.components):
        for c in cb.checks:
            out.record("check", f"component {ci} {c.name} bound={frac(c.bound)} actual={frac(c.actual)} "
                       f"{'ok' if c.holds else 'FAIL'}", component=ci, name=c.name,
                       bound=Fraction(c.bound), actual=Fraction(c.actual), holds=c.holds)
    g = rep.global_check
    out.record("check", f"global {g.name} bound={frac(g.bound)} actual={frac(g.actual)} "
               f"{'ok' if g.holds else 'FAIL'}", component=None, name=g.name,
               bound=Fraction(g.bound), actual=Fraction(g.actual), holds=g.holds)
    out.record("summary", f"bounds {'ok' if rep.all_hold else 'FAIL'}", all_hold=rep.all_hold)
    return 0 if rep.all_hold else 1


def cmd_count_trees(args, out):
    spec = parse_spec(args.spec) if args.spec else None
    table = count_asymmetric_trees(args.max_edges, spec, limit=args.limit)
    for i in sorted(table.unrooted):
        out.record("count", f"{i} {table.unrooted[i]} {table.rooted[i]}", edges=i,
                   unrooted=table.unrooted[i], rooted=table.rooted[i])
    if args.growth:
        fit = estimate_growth(table.unrooted)
        out.record("growth", f"beta={fit.beta_hat:.6f} alpha={fit.alpha_hat:.6g} window={fit.window[0]}-"
                   f"{fit.window[1]} monotone={fit.ratios_monotone}", beta=fit.beta_hat,
                   alpha=fit.alpha_hat, window=list(fit.window), monotone=fit.ratios_monotone)


def cmd_enumerate_enriched(args, out):
    trees, table = enumerate_enriched(parse_spec(args.spec), args.max_vertices)
    for i in sorted(table.unrooted):
        out.record("count", f"{i} {table.unrooted[i]} {table.rooted[i]}", edges=i,
                   unrooted=table.unrooted[i], rooted=table.rooted[i])
    if args.dump:
        for h in trees:
            out.hypergraph(h)


def cmd_t_star(args, out):
    cat = build_T_star(params(args.n1, args.m2), args.max_edges)
    if out.fmt == "text":
        out.text(format_catalogue(cat).rstrip("\n") or "# empty")
    for e in cat:
        out.record("entry", None, key=e.key.hex(), edges=e.edge_count, value=e.value,
                   edge_value=e.edge_value, xi_class_size=e.xi_class_size)


def _emit_report(rep, out):
    out.hypergraph(rep.hypergraph)
    out.record("n2", f"# n2 {frac(rep.n2)}", n2=rep.n2)
    cert = rep.certificate
    out.record("certificate", f"# cert {'ok' if cert.is_asymmetric else 'fail'} group_order={cert.group_order}",
               asymmetric=cert.is_asymmetric, group_order=cert.group_order)
    for k in sorted(rep.notes):
        v = rep.notes[k]
        out.record("note", f"# {k} {frac(v) if isinstance(v, Fraction) else v}", name=k,
                   value=frac(v) if isinstance(v, Fraction) else v)


def cmd_construct(args, out):
    fam = args.family
    if fam == "m2-2":
        rep = cons.build_m2_2_chain(args.m1)
    elif fam == "even-chains":
        t = [int(x) for x in args.t_partition.split(",")] if args.t_partition else None
        rep = cons.build_even_m2_chains(args.m1, args.n1, args.m2, t)
    elif fam == "odd-cycle":
        rep = cons.build_odd_m2_cycle(args.m1, args.n1, args.m2)
    elif fam == "delta":
        rep = cons.build_delta(args.m1, args.n1, args.m2, max_edges=args.max_edges)
    elif fam == "k1":
        rep = cons.build_k1_jlarge(args.m1, args.n1, args.m2, seed=args.seed)
    elif fam == "ring":
        h = cons.build_ring(cons.RingSpec(args.n1, args.m2, args.m1))
        out.hypergraph(h)
        return 0
    else:  # regular
        h = cons.build_regular_asymmetric(args.psi, args.s, args.m1, args.n1, seed=args.seed)
        out.hypergraph(h)
        return 0
    _emit_report(rep, out)
    return 0


def cmd_oracle(args, out):
    budget = args.budget_nodes
    if args.op == "distinguishing":
        shape = MultipartiteShape(tuple(int(x) for x in args.parts.split(",")))
        res = exists_distinguishing(shape, max_vertices=args.max_vertices, budget=budget)
        out.record("distinguishing", f"exists {str(res.exists).lower()} nodes={res.nodes}",
                   exists=res.exists, nodes=res.nodes)
        if res.witness is not None:
            out.record("partition", format_partition(res.witness).rstrip("\n"),
                       text_format=format_partition(res.witness))
    elif args.op == "max-n2":
        res = max_n2(args.m1, args.n1, args.m2, args.n2_bound, budget=budget)
        shown = "none" if res.n2 is None else str(res.n2)
        out.record("max_n2", f"# max_n2 {shown} nodes={res.nodes}", max_n2=res.n2, nodes=res.nodes)
        if res.witness is not None:
            out.hypergraph(res.witness)
    else:
        triples = [tuple(int(x) for x in t.split(",")) for t in args.triples.split(";") if t]
        path = args.fixtures_out or "fixtures.json"
        rows = write_fixtures(path, triples, budget)
        for row in rows:
            out.record("fixture", f"{row['m1']} {row['n1']} {row['m2']} {row['max_n2']} {row['status']}",
                       **{k: row[k] for k in ("m1", "n1", "m2", "max_n2", "status")})
    return 0


def cmd_constants(args, out):
    tc = theorem_constants(args.n1, args.m2, args.m1, args.alpha, args.beta)
    c = "-" if tc.C is None else frac(tc.C)
    out.record("constants", f"C={c} case={tc.C_case or '-'} z={'-' if tc.z is None else tc.z} "
               f"epsilon={tc.epsilon_form}", C=tc.C, case=tc.C_case, z=tc.z, epsilon=tc.epsilon_form)


# -- parser -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=["text", "json-lines"], default="text")
    common.add_argument("--threads", type=int, default=1,
                        help="accepted for compatibility; work is sequential and output order fixed")
    common.add_argument("--budget-nodes", type=int, default=None)

    parser = argparse.ArgumentParser(prog="distpart", description="Distinguishing partitions of "
                                     "complete multipartite graphs via asymmetric hypergraphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("params", parents=[common], help="j, k and r for (n1, m2)")
    p.add_argument("--n1", type=int, required=True)
    p.add_argument("--m2", type=int, required=True)
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("tau", parents=[common], help="partition -> hypergraph (or back)")
    p.add_argument("input", nargs="?")
    p.add_argument("--inverse", action="store_true")
    p.set_defaults(func=cmd_tau)

    p = sub.add_parser("tau-prime", parents=[common], help="partition -> labelled hypergraph (or back)")
    p.add_argument("input", nargs="?")
    p.add_argument("--m2-parts", default="")
    p.add_argument("--inverse", action="store_true")
    p.set_defaults(func=cmd_tau_prime)

    p = sub.add_parser("verify", parents=[common], help="asymmetry certificate for a hypergraph file")
    p.add_argument("input", nargs="?")
    p.add_argument("--label-preserving", action="store_true",
                   help="keep labels fixed instead of checking the full τ")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bounds", parents=[common], help="value bound report")
    p.add_argument("input", nargs="?")
    p.add_argument("--n1", type=int, default=None)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("count-trees", parents=[common], help="asymmetric tree counts")
    p.add_argument("--max-edges", type=int, required=True)
    p.add_argument("--spec", default=None, help="a1,a2,...[;a0=N]")
    p.add_argument("--limit", type=int, default=40)
    p.add_argument("--growth", action="store_true")
    p.set_defaults(func=cmd_count_trees)

    p = sub.add_parser("enumerate-enriched", parents=[common], help="exhaustive enriched tree counts")
    p.add_argument("--spec", required=True)
    p.add_argument("--max-vertices", type=int, required=True)
    p.add_argument("--dump", action="store_true")
    p.set_defaults(func=cmd_enumerate_enriched)

    p = sub.add_parser("t-star", parents=[common], help="positive-value tree catalogue")
    p.add_argument("--n1", type=int, required=True)
    p.add_argument("--m2", type=int, required=True)
    p.add_argument("--max-edges", type=int, default=6)
    p.set_defaults(func=cmd_t_star)

    p = sub.add_parser("construct", parents=[common], help="build a certified construction")
    p.add_argument("family", choices=["m2-2", "even-chains", "odd-cycle", "delta", "k1", "ring", "regular"])
    p.add_argument("--m1", type=int, required=True, help="edge count (t for regular)")
    p.add_argument("--n1", type=int, default=3)
    p.add_argument("--m2", type=int, default=2)
    p.add_argument("--max-edges", type=int, default=8)
    p.add_argument("--t-partition", default=None)
    p.add_argument("--psi", type=int, default=0)
    p.add_argument("--s", type=int, default=3)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("oracle", parents=[common], help="exhaustive ground truth")
    p.add_argument("op", choices=["distinguishing", "max-n2", "fixtures"])
    p.add_argument("--parts", default="", help="part sizes, comma separated")
    p.add_argument("--max-vertices", type=int, default=12)
    p.add_argument("--m1", type=int)
    p.add_argument("--n1", type=int)
    p.add_argument("--m2", type=int)
    p.add_argument("--n2-bound", type=int, default=None)
    p.add_argument("--triples", default="", help="m1,n1,m2;m1,n1,m2;...")
    p.add_argument("--fixtures-out", default=None)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("constants", parents=[common], help="C, z and the error-term form")
    p.add_argument("--n1", type=int, required=True)
    p.add_argument("--m2", type=int, required=True)
    p.add_argument("--m1", type=int, default=None)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--beta", type=float, default=None)
    p.set_defaults(func=cmd_constants)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    saved = os.environ.get("DISTPART_BUDGET")
    if args.budget_nodes is not None:
        os.environ["DISTPART_BUDGET"] = str(args.budget_nodes)
    out = Out(args.format)
    try:
        code = args.func(args, out)
    except BudgetExceeded as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return 2
    except (DistpartError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    finally:
        # main() is also called in-process; leave the environment as found
        if saved is None:
            os.environ.pop("DISTPART_BUDGET", None)
        else:
            os.environ["DISTPART_BUDGET"] = saved
    return code or 0


if __name__ == "__main__":
    sys.exit(main())
