"""Command-line front end: ``wordlab <subcommand> [flags]``.

Exit status: 0 success, 2 parse error, 3 budget exceeded, 4 internal
assertion failure, 1 any other library error.
"""

from __future__ import annotations

import argparse
import sys

from . import fibers, semisimple, towers, varieties
from .errors import BudgetExceeded, ParseError, WordLabError
from .field import make_field, parse_field
from .groups import WreathGroup, build_group, overgroup
from .polynomials import parse_polynomial
from .report import emit
from .words import parse_word

DEFAULT_BUDGET = 10**8

DIST_COLUMNS = ["group", "order", "word", "d", "target", "count", "denominator", "prob",
                "epsilon_hat", "seed", "budget"]
EPS_COLUMNS = ["group", "order", "word", "d", "max_fiber", "argmax", "epsilon_hat", "seed", "budget"]
COSET_COLUMNS = ["group", "overgroup", "word", "d", "cosets", "target", "count", "direct_count",
                 "image_size", "seed", "budget"]
COSET_EPS_COLUMNS = ["group", "overgroup", "word", "d", "max_fiber", "epsilon_hat", "tested",
                     "exhaustive", "seed", "budget"]
WREATH_COLUMNS = ["group", "T", "k", "word", "sigma_taus", "num_components", "num_disjoint", "bound_m",
                  "max_prob", "max_prob_exact", "delta_hat", "epsilon_pred", "pass", "sampled", "seed",
                  "budget"]
HDIM_COLUMNS = ["family", "level", "group", "order", "word", "selector", "fiber", "ratio", "running_min",
                "seed", "budget"]
ZEROS_COLUMNS = ["q", "N", "poly_degree", "count", "bound", "pass", "seed", "budget"]
TWISTED_COLUMNS = ["p", "f", "k", "m", "t", "fixed_count", "zero_fixed_count", "bound_value", "ratio",
                   "pred_pt", "pred_ptf", "seed", "budget"]


def _target(G, text: str | None) -> int | None:
    if text is None:
        return None
    if text == "identity":
        return 0
    try:
        return int(text)
    except ValueError:
        raise ParseError(f"target must be an element index or 'identity', not {text!r}") from None


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(";", ",").split(",") if x.strip()]
    except ValueError:
        raise ParseError(f"expected comma-separated integers, got {text!r}") from None


def _common(args) -> dict:
    return {"seed": args.seed, "budget": args.budget}


def cmd_dist(args):
    G = build_group(args.group)
    w = parse_word(args.word)
    dist = fibers.distribution(G, w, args.budget, args.workers)
    eps = dist.epsilon().epsilon_hat
    target = _target(G, args.target)
    targets = range(G.order) if target is None else [target]
    rows = []
    for g in targets:
        p = dist.prob(g)
        rows.append({"group": G.spec, "order": G.order, "word": str(w), "d": w.d, "target": g,
                     "count": dist.count(g), "denominator": dist.total,
                     "prob": f"{p.numerator}/{p.denominator}", "epsilon_hat": eps, **_common(args)})
    return rows, DIST_COLUMNS


def cmd_eps(args):
    G = build_group(args.group)
    w = parse_word(args.word)
    rep = fibers.epsilon_hat(G, w, args.budget, args.workers)
    return [{"group": G.spec, "order": G.order, "word": str(w), "d": w.d, "max_fiber": rep.max_fiber,
             "argmax": " ".join(map(str, rep.argmax)), "epsilon_hat": rep.epsilon_hat,
             **_common(args)}], EPS_COLUMNS


def cmd_coset(args):
    T = build_group(args.group)
    ext = overgroup(T)
    w = parse_word(args.word)
    if args.cosets is None:
        rep = fibers.coset_epsilon(ext, w, args.budget, args.seed, args.workers)
        return [{"group": T.spec, "overgroup": ext.A.spec, "word": str(w), "d": w.d,
                 "max_fiber": rep.max_fiber, "epsilon_hat": rep.epsilon_hat, "tested": rep.tested,
                 "exhaustive": rep.exhaustive, **_common(args)}], COSET_EPS_COLUMNS
    cosets = _ints(args.cosets)
    rewrite = fibers.coset_counts_over_A(ext, w, cosets, args.budget, args.workers)
    direct = fibers.coset_counts_direct(ext, w, cosets, args.budget, args.workers)
    if (rewrite != direct).any():
        raise AssertionError("rewrite-based and direct coset counts disagree")
    image = int((rewrite > 0).sum())
    target = _target(ext.A, args.target)
    targets = [target] if target is not None else [int(g) for g in rewrite.nonzero()[0]]
    rows = [{"group": T.spec, "overgroup": ext.A.spec, "word": str(w), "d": w.d,
             "cosets": " ".join(map(str, cosets)), "target": g, "count": int(rewrite[g]),
             "direct_count": int(direct[g]), "image_size": image, **_common(args)} for g in targets]
    return rows, COSET_COLUMNS


def cmd_wreath(args):
    G = build_group(args.group)
    if not isinstance(G, WreathGroup):
        raise ParseError("wreath needs a wreath:... or power:... group spec")
    w = parse_word(args.word)
    rep = semisimple.semisimple_prob_check(G, w, args.budget, args.seed, args.workers)
    return [rep.as_dict()], WREATH_COLUMNS


def cmd_hdim(args):
    w = parse_word(args.word)
    if args.family == "custom":
        levels = [s.strip() for s in args.levels.split(";") if s.strip()]
    else:
        levels = _ints(args.levels)
    tower = towers.make_tower(args.family, levels, args.p)
    prof = towers.hdim_profile(tower, w, args.selector, args.d, args.budget, args.workers)
    rows = [{"family": prof.family, "level": r.level, "group": r.group, "order": r.order, "word": prof.word,
             "selector": prof.selector, "fiber": r.fiber, "ratio": r.ratio, "running_min": r.running_min,
             **_common(args)} for r in prof.records]
    return rows, HDIM_COLUMNS


def cmd_zeros(args):
    F = parse_field(args.field)
    polys = [parse_polynomial(text, F, args.n) for text in args.poly]
    count = varieties.count_affine_zeros(polys, F, args.n, args.budget, args.workers)
    deg = min(f.degree for f in polys)
    bound = deg * F.q ** (args.n - 1)
    return [{"q": F.q, "N": args.n, "poly_degree": max(f.degree for f in polys), "count": count,
             "bound": bound, "pass": count <= bound, **_common(args)}], ZEROS_COLUMNS


def cmd_twisted(args):
    spec = varieties.TwistedFrobeniusSpec(args.p, args.f, args.k, args.m, args.t)
    Q = parse_polynomial(args.poly[0], make_field(args.p), spec.nvars, block=args.k)
    res = varieties.twisted_fixed_points(Q, spec, args.budget, args.workers)
    return [{"p": args.p, "f": args.f, "k": args.k, "m": args.m, "t": args.t,
             "fixed_count": res.fixed_count, "zero_fixed_count": res.zero_fixed_count,
             "bound_value": res.bound_value, "ratio": res.ratio, "pred_pt": res.prediction_pt,
             "pred_ptf": res.prediction_ptf, **_common(args)}], TWISTED_COLUMNS


COMMANDS = {
    "dist": (cmd_dist, "exact fiber distribution of a word map"),
    "eps": (cmd_eps, "largest fiber and measured epsilon"),
    "coset": (cmd_coset, "coset-restricted fiber counts (or coset epsilon without --cosets)"),
    "wreath": (cmd_wreath, "semisimple probability check on a wreath/power group"),
    "hdim": (cmd_hdim, "fiber-ratio profile over a quotient tower"),
    "zeros": (cmd_zeros, "zeros of a polynomial system over F_q and the hypersurface bound"),
    "twisted": (cmd_twisted, "fixed points of the twisted Frobenius model"),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wordlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--group")
        p.add_argument("--word")
        p.add_argument("--d", type=int)
        p.add_argument("--target")
        p.add_argument("--cosets")
        p.add_argument("--family", default="dihedral")
        p.add_argument("--levels")
        p.add_argument("--selector", default="identity", choices=["identity", "max"])
        p.add_argument("--field")
        p.add_argument("--n", type=int)
        p.add_argument("--poly", action="append")
        for flag in ("--p", "--f", "--k", "--m", "--t"):
            p.add_argument(flag, type=int)
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out")
        p.add_argument("--format", default="csv", choices=["csv", "json"])
        p.add_argument("--workers", type=int, default=1)
    return parser


_REQUIRED = {
    "dist": ("group", "word"), "eps": ("group", "word"), "coset": ("group", "word"),
    "wreath": ("group", "word"), "hdim": ("family", "levels", "word"), "zeros": ("field", "n", "poly"),
    "twisted": ("p", "f", "k", "m", "t", "poly"),
}


def run(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        missing = [f"--{a}" for a in _REQUIRED[args.command] if getattr(args, a) is None]
        if missing:
            raise ParseError(f"{args.command} needs {' '.join(missing)}")
        handler = COMMANDS[args.command][0]
        rows, columns = handler(args)
        text = emit(rows, columns, args.format, args.out, single=args.command == "wreath")
        if args.out is None:
            sys.stdout.write(text)
        return 0
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 3
    except AssertionError as exc:
        print(f"internal assertion failed: {exc}", file=sys.stderr)
        return 4
    except WordLabError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
