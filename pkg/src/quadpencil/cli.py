"""Command-line front end.

    quadpencil generate --flavor gauss --weight unit --a -1 --b 1 --n 1 --format csv
    quadpencil verify rule.json --weight unit --a -1 --b 1
    quadpencil compare-bases --weight inv_one_plus_x --n-min 2 --n-max 8

Exit codes: 0 success, 1 exactness failure, 2 usage or input error,
3 numerical failure.
"""

import argparse
import sys

import numpy as np

from . import assembly
from .errors import QuadratureError, UnknownWeight
from .linalg import condition_estimate, general_geig, sym_definite_geig
from .model import QuadratureRule, RealDomain
from .rules import circle_rule, fixed_node_rule, gauss_rule
from .verify import DEFAULT_TOL, check_exactness

EXIT_OK, EXIT_INEXACT, EXIT_USAGE, EXIT_NUMERICAL = 0, 1, 2, 3
FLAVORS = ("gauss", "circle", "radau", "lobatto", "fixed")
BASES = ("monomial", "augmented", "augmented_orthonormal", "recursion")


class UsageError(ValueError):
    pass


def _fmt(x):
    return repr(float(x))


def _domain(entry, args):
    if entry.domain is None and (args.a is None or args.b is None):
        raise UsageError(f"weight {entry.weight_id!r} has no default interval; pass --a and --b")
    a = entry.domain[0] if args.a is None else args.a
    b = entry.domain[1] if args.b is None else args.b
    return RealDomain(a, b, entry.weight_id)


def _parse_fixed(text):
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"cannot parse fixed nodes {text!r}") from None


def generate_rule(args):
    entry = assembly.get_weight(args.weight)
    if args.flavor == "circle":
        if not entry.on_circle:
            raise UsageError(f"weight {entry.weight_id!r} is not defined on the unit circle")
        return circle_rule(assembly.build_pencil("circle", entry, n=args.n))
    if not entry.on_interval:
        raise UsageError(f"weight {entry.weight_id!r} lives on the unit circle; use --flavor circle")
    dom = _domain(entry, args)
    basis = args.basis or ("recursion" if "recursion" in entry.bases else "monomial")
    if args.flavor == "gauss":
        return gauss_rule(assembly.build_pencil("interval", entry, dom, args.n, basis))
    if args.flavor == "radau":
        fixed = [dom.a] if args.radau_end == "left" else [dom.b]
    elif args.flavor == "lobatto":
        fixed = [dom.a, dom.b]
    else:
        if not args.fixed:
            raise UsageError("--flavor fixed needs --fixed y1,y2,...")
        fixed = _parse_fixed(args.fixed)
    if basis not in ("monomial", "recursion"):
        raise UsageError("fixed-node rules use the monomial or recursion basis")
    pencil = assembly.pencil_fixed_nodes(entry, dom, args.n, fixed, basis)
    return fixed_node_rule(pencil, assembly.moments(entry, dom))


def format_rule(rule, fmt):
    if fmt == "json":
        return rule.to_json()
    if rule.flavor == "circle":
        header = ["node_re", "node_im", "weight_re", "weight_im"]
        rows = [[_fmt(x.real), _fmt(x.imag), _fmt(w.real), _fmt(w.imag)]
                for x, w in zip(rule.nodes, rule.weights)]
    elif rule.fixed:
        header = ["node", "weight", "fixed"]
        entries = [(y, v, "1") for y, v in rule.fixed] + [(x, w, "0") for x, w in zip(rule.nodes, rule.weights)]
        rows = [[_fmt(x), _fmt(w), f] for x, w, f in sorted(entries)]
    else:
        header = ["node", "weight"]
        rows = [[_fmt(x), _fmt(w)] for x, w in zip(rule.nodes, rule.weights)]
    if fmt == "csv":
        return "\n".join(",".join(r) for r in [header] + rows)
    widths = [max(len(r[i]) for r in [header] + rows) for i in range(len(header))]
    lines = ["  ".join(c.rjust(wd) for c, wd in zip(r, widths)) for r in [header] + rows]
    lines.append(f"# {rule.flavor} rule, exact through degree {rule.exact_degree}")
    return "\n".join(lines)


def cmd_generate(args):
    rule = generate_rule(args)
    text = format_rule(rule, args.format)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return EXIT_OK


def cmd_verify(args):
    try:
        raw = sys.stdin.read() if args.rule == "-" else open(args.rule).read()
        rule = QuadratureRule.from_json(raw)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot read rule {args.rule!r}: {exc}") from None
    entry = assembly.get_weight(args.weight)
    if rule.flavor == "circle":
        moments = assembly.moments(entry, "circle")
    else:
        moments = assembly.moments(entry, _domain(entry, args))
    report = check_exactness(rule, moments, tol=args.tol)
    print(report.to_json() if args.format == "json" else report.to_text())
    return EXIT_OK if report.passed else EXIT_INEXACT


def compare_bases(weight, domain, n_values):
    """Rows ``(n, {basis: cond(B)}, {basis: max |dx|})`` relative to the first basis.

    ``domain`` is a ``RealDomain`` or an ``(a, b)`` pair; ``None`` compares
    circle pencils (only the monomial basis exists).

    Failures are recorded as the error class name instead of a number.
    """
    entry = assembly.get_weight(weight)
    if domain is None:
        bases = ["monomial"]
    else:
        if not isinstance(domain, RealDomain):
            domain = RealDomain(*domain, entry.weight_id)
        bases = [b for b in entry.bases
                 if b != "augmented" or (domain.a, domain.b) == (0.0, 1.0)]
    rows = []
    for n in n_values:
        conds, nodes = {}, {}
        for basis in bases:
            try:
                if domain is None:
                    pencil = assembly.build_pencil("circle", entry, n=n)
                    conds[basis] = condition_estimate(pencil.B)
                    nodes[basis] = general_geig(pencil.A, pencil.B).eigenvalues
                    continue
                pencil = assembly.build_pencil("interval", entry, domain, n, basis)
                conds[basis] = condition_estimate(pencil.B)
                nodes[basis] = sym_definite_geig(pencil.A, pencil.B).eigenvalues
            except QuadratureError as exc:
                conds.setdefault(basis, type(exc).__name__)
                nodes[basis] = type(exc).__name__
        ref = nodes[bases[0]]
        deltas = {}
        for basis in bases[1:]:
            if isinstance(ref, str) or isinstance(nodes[basis], str):
                deltas[basis] = ref if isinstance(ref, str) else nodes[basis]
            else:
                deltas[basis] = float(np.max(np.abs(nodes[basis] - ref)))
        rows.append((n, conds, deltas))
    return bases, rows


def cmd_compare_bases(args):
    entry = assembly.get_weight(args.weight)
    dom = _domain(entry, args) if entry.on_interval else None
    if args.n_min < 0 or args.n_max < args.n_min:
        raise UsageError("need 0 <= --n-min <= --n-max")
    bases, rows = compare_bases(entry, dom, range(args.n_min, args.n_max + 1))

    def cell(v):
        return v if isinstance(v, str) else f"{v:.3e}"

    header = ["n"] + [f"cond[{b}]" for b in bases] + [f"dx[{b}]" for b in bases[1:]]
    body = [[str(n)] + [cell(c[b]) for b in bases] + [cell(d[b]) for b in bases[1:]]
            for n, c, d in rows]
    if args.format == "csv":
        print("\n".join(",".join(r) for r in [header] + body))
    else:
        widths = [max(len(r[i]) for r in [header] + body) for i in range(len(header))]
        for r in [header] + body:
            print("  ".join(c.rjust(w) for c, w in zip(r, widths)))
        if len(bases) > 1:
            print(f"# dx: max node difference against the {bases[0]} basis")
    if len(bases) == 1:
        print(f"# weight {entry.weight_id!r} offers a single basis; "
              "nothing to compare")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="quadpencil", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def weight_args(p, default="unit"):
        p.add_argument("--weight", default=default, help="registered weight id")
        p.add_argument("--a", type=float, help="left end of the interval")
        p.add_argument("--b", type=float, help="right end of the interval")

    g = sub.add_parser("generate", help="compute a quadrature rule")
    g.add_argument("--flavor", choices=FLAVORS, default="gauss")
    weight_args(g)
    g.add_argument("--n", type=int, required=True, help="rule has n + 1 free nodes")
    g.add_argument("--basis", choices=BASES, help="default: recursion when available")
    g.add_argument("--fixed", help="comma-separated prescribed nodes; write --fixed=-1,1 "
                   "when the first is negative")
    g.add_argument("--radau-end", choices=("left", "right"), default="left")
    g.add_argument("--format", choices=("json", "csv", "table"), default="json")
    g.add_argument("-o", "--output", help="write to a file instead of standard output")
    g.set_defaults(func=cmd_generate)

    v = sub.add_parser("verify", help="check a rule against analytic moments")
    v.add_argument("rule", help="rule JSON file, or - for standard input")
    weight_args(v)
    v.add_argument("--tol", type=float, default=DEFAULT_TOL)
    v.add_argument("--format", choices=("table", "json"), default="table")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("compare-bases", help="conditioning and node agreement across bases")
    weight_args(c, default="inv_one_plus_x")
    c.add_argument("--n-min", type=int, default=2)
    c.add_argument("--n-max", type=int, default=8)
    c.add_argument("--format", choices=("table", "csv"), default="table")
    c.set_defaults(func=cmd_compare_bases)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "n", 0) is not None and getattr(args, "n", 0) < 0:
        parser.error("--n must be non-negative")
    try:
        return args.func(args)
    except QuadratureError as exc:
        print(f"quadpencil: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (UsageError, UnknownWeight, ValueError) as exc:
        print(f"quadpencil: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def run():
    sys.exit(main())
