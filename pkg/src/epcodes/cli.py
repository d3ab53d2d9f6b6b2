"""The ``epcodes`` command line.

Exit codes: 0 valid / found, 1 invalid / absent / unknown, 2 usage or parse
error. Reports are ``key value`` lines; rationals print as ``a/b``.
"""

from __future__ import annotations

import argparse
import math
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import codes, construct, galois, hypergraph as hg, search, universal


class UsageError(Exception):
    """Bad input attributed to one command-line flag."""

    def __init__(self, flag: str, message: str):
        super().__init__(f"{flag}: {message}")


def _rational(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None
    if not 0 <= value < 1:
        raise argparse.ArgumentTypeError(f"must lie in [0, 1), got {text}")
    return value


def _fmt(x) -> str:
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, bool):
        return "true" if x else "false"
    return str(x)


def _load_hypergraph(spec: str, flag: str = "--hypergraph") -> hg.Hypergraph:
    try:
        return hg.load_hypergraph(spec)
    except (hg.HypergraphError, galois.FieldError, ValueError) as exc:
        raise UsageError(flag, str(exc)) from None


def _load_code(spec: str, flag: str = "--code") -> codes.Code:
    try:
        return codes.load_code(spec)
    except (codes.CodeError, galois.FieldError, ValueError) as exc:
        raise UsageError(flag, str(exc)) from None


def _field(q: int, flag: str = "--field") -> galois.FieldSpec:
    try:
        return galois.field(q)
    except (galois.FieldError, ValueError) as exc:
        raise UsageError(flag, str(exc)) from None


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _figure(cert: codes.Certificate, path: str | None, title: str) -> None:
    if path:
        from .report import edge_success_figure

        edge_success_figure(cert.successes, cert.threshold, path, title)


def _comment(lines) -> str:
    return "".join(f"# {line}\n" for line in lines)


# subcommands


def cmd_hypergraph(args) -> int:
    g = _load_hypergraph(args.hypergraph)
    if args.output:
        Path(args.output).write_text(hg.format_hypergraph(g))
    res = hg.strong_chromatic(g, args.chromatic, args.budget)
    print(f"n {g.n}")
    print(f"k {g.k}")
    print(f"edges {len(g.edges)}")
    print(f"chromatic {res.colors_used}")
    print(f"lower_bound {res.lower_bound}")
    print(f"status {res.status}")
    print(f"nodes {res.nodes}")
    print("coloring " + " ".join(str(c + 1) for c in res.coloring.colors))
    return 0


def _compose_base(args, g: hg.Hypergraph, colors: int) -> codes.Code:
    if args.base:
        return _load_code(args.base, "--base")
    n = max(colors, g.k)
    q = args.field if args.field else galois.next_prime_power(max(n - 1, 2))
    f = _field(q)
    try:
        return codes.rs_code(f, n, g.k)
    except codes.CodeError as exc:
        raise UsageError("--field", str(exc)) from None


def cmd_construct(args) -> int:
    if args.kind == "compose":
        if not args.hypergraph:
            raise UsageError("--hypergraph", "required for compose")
        g = _load_hypergraph(args.hypergraph)
        res = hg.strong_chromatic(g, args.chromatic, args.budget)
        base = _compose_base(args, g, res.colors_used)
        try:
            code = construct.compose(g, res.coloring, base)
        except codes.CodeError as exc:
            raise UsageError("--base", str(exc)) from None
        verify = lambda: codes.verify_eps(code, g, args.eps, args.jobs)  # noqa: E731
        title = f"compose on {args.hypergraph}"
    elif args.kind == "pg":
        if not args.field or not args.k:
            raise UsageError("--field", "pg needs --field and --k")
        f = _field(args.field)
        try:
            code = construct.pg_linear_code(f, args.k)
        except codes.CodeError as exc:
            raise UsageError("--k", str(exc)) from None
        verify = lambda: codes.verify_exact(code, hg.pg_hypergraph(f, args.k, max_vertices=code.n), args.jobs)  # noqa: E731
        title = f"projective code q={args.field} k={args.k}"
    else:
        if not args.p or not args.n:
            raise UsageError("--p", "avg needs --p and --n")
        _field(args.p, "--p")
        try:
            code = construct.average_error_code(args.p, args.n)
        except codes.CodeError as exc:
            raise UsageError("--n", str(exc)) from None
        bound = construct.average_error_bound(args.p, args.n)
        verify = lambda: codes.verify_avg(code, hg.complete(args.n, 2), Fraction(1, args.p + 1), args.jobs)  # noqa: E731
        title = f"average-error code p={args.p} n={args.n}"
    text = codes.format_code(code)
    status = 0
    if args.verify or args.figure:
        cert = verify()
        extra = [f"closed_form_bound {_fmt(bound)}"] if args.kind == "avg" else []
        text += _comment(cert.lines() + extra)
        status = 0 if cert.valid else 1
        _figure(cert, args.figure, title)
    _emit(text, args.output)
    return status


def cmd_verify(args) -> int:
    code = _load_code(args.code)
    g = _load_hypergraph(args.hypergraph)
    try:
        if args.avg_eps is not None:
            cert = codes.verify_avg(code, g, args.avg_eps, args.jobs)
        else:
            cert = codes.verify_eps(code, g, args.eps or 0, args.jobs)
    except codes.CodeError as exc:
        raise UsageError("--code", str(exc)) from None
    print(cert)
    _figure(cert, args.figure, f"{args.code} on {args.hypergraph}")
    return 0 if cert.valid else 1


def _random_vertex(rng: np.random.Generator, q: int, family: str) -> np.ndarray:
    variant = universal.FAMILIES[family][0]
    if variant == "balanced":
        return rng.permutation(np.repeat(np.arange(q), q))
    if variant == "unrestricted":
        return rng.integers(0, q, size=q * q)
    if variant == "perm-blocks":
        return np.concatenate([rng.permutation(q) for _ in range(q)])
    return np.array(universal.expand_shifts(q, rng.integers(0, q, size=q).tolist()))


def cmd_universal(args) -> int:
    q, family = args.q, args.family
    variant = universal.FAMILIES[family][0]
    try:
        if args.action == "enum":
            for u in universal.enumerate_vertices(q, variant):
                print(u.digits())
        elif args.action == "cover":
            for s in universal.canonical_cover(q, family):
                print(s)
        elif args.action == "color":
            graph = universal.UniversalGraph.family(q, family)
            coloring = universal.coloring_from_cover(universal.canonical_cover(q, family), graph.vertices)
            for row, c in zip(graph.vertices, coloring.colors):
                print(f"{universal.UniversalVertex(q, row.tolist(), variant).digits()} {c + 1}")
            print(f"# colors {coloring.c}")
            valid = graph.validate_coloring(coloring)
            print(f"# valid {_fmt(valid)}")
            if not valid:
                return 1
        elif args.action == "clique":
            mds = codes.rs_code(_field(q, "--q"), q + 1, 2)
            for u in universal.clique_from_mds(mds):
                print(u.digits())
        else:
            return _universal_stats(args)
    except universal.UniversalError as exc:
        raise UsageError("--q", str(exc)) from None
    return 0


def _universal_stats(args) -> int:
    q, family = args.q, args.family
    variant = universal.FAMILIES[family][0]
    eps = universal.family_eps(family, q)
    print(f"q {q}")
    print(f"family {family}")
    print(f"variant {variant}")
    print(f"eps {_fmt(eps)}")
    print(f"vertices {universal.vertex_count(q, variant)}")
    print(f"adjacency_threshold {math.ceil((1 - eps) * q * q)}")
    try:
        print(f"cover_size {universal.cover_size(q, family)}")
    except universal.UniversalError:
        pass
    if variant == "balanced":
        print(f"collision_probability {_fmt(universal.balanced_collision_probability(q, q))}")
    if q <= universal.ENUM_CAPS[variant] and not (eps == 0 and variant == "unrestricted"):
        graph = universal.UniversalGraph(q, variant, eps)
        print(f"degree_first_vertex {graph.degree(0)}")
    home_family = family if family in ("Gq", "Gq_eps") else None
    if home_family and args.samples:
        rng = np.random.default_rng(args.seed)
        hits = 0
        for _ in range(args.samples):
            u = _random_vertex(rng, q, family)
            home = universal.find_canonical_home(u.tolist(), home_family, q)
            hits += home is not None and home.contains(u.tolist())
        print(f"samples {args.samples}")
        print(f"seed {args.seed}")
        print(f"homes_found {hits}")
    return 0


def cmd_search(args) -> int:
    g = _load_hypergraph(args.hypergraph)
    try:
        res = search.q_exact(g, args.eps, args.qmax, args.budget)
    except universal.CapExceeded as exc:
        raise UsageError("--qmax", str(exc)) from None
    except ValueError as exc:
        raise UsageError("--hypergraph", str(exc)) from None
    print("\n".join(res.lines()))
    if res.witness is not None:
        text = codes.format_code(res.witness)
        if args.output:
            Path(args.output).write_text(text)
            print(f"witness {args.output}")
        else:
            print("witness")
            sys.stdout.write(text)
    return 0 if res.status == "found" else 1


def cmd_fixtures(args) -> int:
    fx = codes.fixtures()
    if args.action == "list":
        for name, code in fx.items():
            target, eps = codes.FIXTURE_TARGETS[name]
            print(f"{name} q={code.q} k={code.k} n={code.n} target={target} eps={_fmt(eps)}")
        return 0
    if args.name not in fx:
        raise UsageError("name", f"unknown fixture {args.name!r}; try 'epcodes fixtures list'")
    sys.stdout.write(codes.format_code(fx[args.name]))
    return 0


def cmd_selftest(args) -> int:
    from . import acceptance

    only = set(args.only) if args.only else None
    results = acceptance.run_checks(only)
    lines = []
    for out in results:
        lines.append(out.line())
        lines += [f"  {d}" for d in out.details]
        lines += [f"  failed {f}" for f in out.failures]
    passed = sum(o.ok for o in results)
    lines.append(f"passed {passed}/{len(results)}")
    print("\n".join(lines))
    if args.report_dir:
        _selftest_report(Path(args.report_dir), results, lines)
    return 0 if passed == len(results) else 1


def _selftest_report(root: Path, results, lines) -> None:
    from . import report

    report.write_report(root / "report.txt", lines)
    by_id = {o.id: o for o in results}
    if 2 in by_id:
        for name, (successes, threshold) in by_id[2].data.items():
            report.edge_success_figure(successes, threshold, root / f"edge_success_{name}.png", name)
    if 6 in by_id and by_id[6].data.get("rows"):
        report.average_error_figure(by_id[6].data["rows"], root / "average_error.png")
    sizes = {}
    for cid in (4, 5):
        if cid in by_id:
            sizes.update({k: v for k, v in by_id[cid].data.items()})
    if sizes:
        report.cover_figure(sizes, root / "cover_classes.png")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="epcodes", description="Codes decodable from the edges of a hypergraph.")
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized procedures (default 0)")
    parser.add_argument("--jobs", type=int, default=1, help="worker cap for edge verification")
    # the global flags may also follow the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--jobs", type=int, default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, **kw) -> argparse.ArgumentParser:
        return sub.add_parser(name, parents=[common], **kw)

    p = add("hypergraph", help="summarize a hypergraph and its strong chromatic number")
    p.add_argument("--hypergraph", required=True, help="file or shorthand (complete:n:k, cycle:n, pg:q:k, fano-complement)")
    p.add_argument("--chromatic", choices=("exact", "greedy"), default="exact")
    p.add_argument("--budget", type=int, default=hg.DEFAULT_BUDGET)
    p.add_argument("--output", help="write the hypergraph in file format")
    p.set_defaults(func=cmd_hypergraph)

    p = add("construct", help="build a code")
    p.add_argument("kind", choices=("compose", "pg", "avg"))
    p.add_argument("--hypergraph", help="compose: target hypergraph")
    p.add_argument("--base", help="compose: base code (fixture, rs:q:n:k or file)")
    p.add_argument("--chromatic", choices=("exact", "greedy"), default="exact")
    p.add_argument("--budget", type=int, default=hg.DEFAULT_BUDGET)
    p.add_argument("--eps", type=_rational, default=Fraction(0), help="compose: error level to verify at")
    p.add_argument("--field", type=int, help="field size q (pg; compose base)")
    p.add_argument("--k", type=int, help="pg: dimension")
    p.add_argument("--p", type=int, help="avg: alphabet size (prime power)")
    p.add_argument("--n", type=int, help="avg: clique size")
    p.add_argument("--verify", action="store_true", help="append the certificate as '#' lines")
    p.add_argument("--output", help="write the code here instead of standard output")
    p.add_argument("--figure", help="write an edge-success histogram (implies verification)")
    p.set_defaults(func=cmd_construct)

    p = add("verify", help="check a code against a hypergraph")
    p.add_argument("--code", required=True, help="fixture name, rs:q:n:k or code file")
    p.add_argument("--hypergraph", required=True)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--eps", type=_rational, help="per-edge failure allowance")
    mode.add_argument("--avg-eps", type=_rational, help="edge-averaged failure allowance")
    p.add_argument("--figure", help="write an edge-success histogram")
    p.set_defaults(func=cmd_verify)

    p = add("universal", help="universal graphs and their covers")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--family", choices=tuple(universal.FAMILIES), default="Gq")
    p.add_argument("--action", choices=("enum", "cover", "color", "clique", "stats"), required=True)
    p.add_argument("--samples", type=int, default=0, help="stats: random vertices to locate in the cover")
    p.set_defaults(func=cmd_universal)

    p = add("search", help="smallest alphabet by exhaustive search")
    p.add_argument("--hypergraph", required=True)
    p.add_argument("--eps", type=_rational, default=Fraction(0))
    p.add_argument("--qmax", type=int, required=True)
    p.add_argument("--budget", type=int, default=search.DEFAULT_BUDGET)
    p.add_argument("--output", help="write the witness code here")
    p.set_defaults(func=cmd_search)

    p = add("fixtures", help="built-in codes")
    p.add_argument("action", choices=("list", "show"))
    p.add_argument("name", nargs="?")
    p.set_defaults(func=cmd_fixtures)

    p = add("selftest", help="run the acceptance checks")
    p.add_argument("--report-dir", help="write report.txt and figures here")
    p.add_argument("--only", type=int, nargs="+", help="criterion ids to run")
    p.set_defaults(func=cmd_selftest)
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "fixtures" and args.action == "show" and not args.name:
            raise UsageError("name", "fixtures show needs a NAME")
        return args.func(args)
    except UsageError as exc:
        print(f"epcodes: error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())
