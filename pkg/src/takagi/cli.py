"""Command-line front end.

Every command prints one JSON record {command, inputs, results}, or a CSV
table with ``--format csv`` where a table makes sense.  Rationals print as
``p/q`` unless ``--decimal N`` is given.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .core_numbers import (
    BinExp,
    DomainError,
    ResourceError,
    binexp_of_rational,
    format_value,
    parse_point,
    parse_rat,
)
from .local_levels import (
    INF,
    enumerate_members,
    infinite_level_family,
    level_half_family,
    local_level_set,
)
from .omega_structure import (
    enumerate_breakpoints,
    enumerate_gap_intervals,
    gap_row,
    gaps_csv,
    in_omega_L,
    omega_variant,
    project_omega_L,
)
from .singular_bv import (
    FunctionTag,
    coarea_integral,
    level_count_csv,
    random_levels,
    sample_pl,
    sweep_csv,
    total_variation,
    upper_set_perimeter,
)
from .takagi_eval import series_tail_bound, takagi_exact, takagi_partial, takagi_series

EXIT_DOMAIN = 2
EXIT_RESOURCE = 3


class _Out:
    def __init__(self, args):
        self.digits = args.decimal

    def rat(self, x: Fraction) -> str:
        return format_value(x, self.digits)


def _point(text: str):
    """(value, expansion) from ``p/q`` or an expansion literal."""
    x = parse_point(text)
    if isinstance(x, BinExp):
        return x.value, x
    if not 0 <= x <= 1:
        raise DomainError(f"{text} is outside [0, 1]")
    return x, binexp_of_rational(x)


def cmd_eval(args, out):
    x, b = _point(args.x)
    res = {"x": out.rat(x), "expansion": str(b), "tau": out.rat(takagi_exact(b))}
    if args.partial is not None:
        res["partial_n"] = str(args.partial)
        res["partial"] = out.rat(takagi_partial(x, args.partial))
    if args.series is not None:
        res["series_terms"] = str(args.series)
        res["series"] = out.rat(takagi_series(b, args.series, digit_counts=args.digit_counts))
        res["series_error_bound"] = out.rat(series_tail_bound(args.series))
    return res


def cmd_localset(args, out):
    _, b = _point(args.x)
    desc = local_level_set(b)
    z = desc.balance
    res = {
        "expansion": str(b),
        "level": out.rat(desc.level),
        "cardinality": str(desc.cardinality) if desc.finite else "uncountable",
        "hausdorff_dim": out.rat(desc.hausdorff_dim),
        "left_endpoint": str(desc.left_endpoint),
        "balance_points": [str(c) for c in z.points],
    }
    if not z.finite:
        res["balance_anchor"] = str(z.anchor)
        res["balance_period"] = str(z.period)
        res["depth"] = str(args.depth)
    res["members"] = [str(m) for m in enumerate_members(desc, args.depth)]
    return res


def cmd_omega(args, out):
    x, b = _point(args.x)
    if args.action == "check":
        res = {"expansion": str(b), "in_omega_L": in_omega_L(b)}
        if not isinstance(parse_point(args.x), BinExp):
            v = omega_variant(x)
            res["variant"] = v.name if v else "none"
        return res
    p = project_omega_L(b)
    return {"expansion": str(b), "projection": str(p), "value": out.rat(p.value)}


def cmd_breakpoints(args, out):
    bps = enumerate_breakpoints(args.m, args.cap)
    if args.format == "csv":
        return ["B,bits,small"] + [f"{out.rat(B.value)},{B.bits},{int(B.small)}" for B in bps]
    return {
        "count": str(len(bps)),
        "breakpoints": [out.rat(B.value) for B in bps],
        "bits": [B.bits for B in bps],
    }


def cmd_gaps(args, out):
    gaps = enumerate_gap_intervals(args.max_2m, args.cap)
    if args.format == "csv":
        if out.digits is None:
            return gaps_csv(gaps)
        rows = ["two_m,B,x_minus,x_plus,tau_x_minus,tau_x_plus"]
        for g in gaps:
            vals = [g.B.value, g.x_minus, g.x_plus, takagi_exact(g.x_minus), takagi_exact(g.x_plus)]
            rows.append(",".join([str(g.two_m)] + [out.rat(v) for v in vals]))
        return rows
    keys = ("two_m", "B", "x_minus", "x_plus", "tau_x_minus", "tau_x_plus")
    return {"count": str(len(gaps)), "gaps": [dict(zip(keys, gap_row(g))) for g in gaps]}


def _k(text: str):
    return INF if text.lower() in ("inf", "infinity", "oo") else int(text)


def cmd_level_half(args, out):
    x = level_half_family(_k(args.k))
    return {"x": out.rat(x), "complement": out.rat(1 - x), "tau": out.rat(takagi_exact(x))}


def cmd_family(args, out):
    x, y = infinite_level_family(parse_rat(args.B), _k(args.k))
    return {"x": out.rat(x), "y": out.rat(y), "tau": out.rat(takagi_exact(x))}


def cmd_sample(args, out):
    if args.function == "all":
        if args.depth > 20:
            raise ResourceError(f"depth {args.depth} exceeds the sampling cap 20")
        if args.format == "csv":
            return sweep_csv(args.depth, out.digits)
        raise DomainError("the four-column sweep is CSV only; use --format csv")
    f = sample_pl(FunctionTag.parse(args.function), args.depth)
    if args.format == "csv":
        return ["x,value"] + [f"{out.rat(x)},{out.rat(v)}" for x, v in zip(f.grid, f.values)]
    return {
        "grid": [out.rat(x) for x in f.grid],
        "values": [out.rat(v) for v in f.values],
        "total_variation": out.rat(total_variation(f)),
    }


def cmd_coarea(args, out):
    levels = random_levels(args.seed, args.samples, args.depth)
    if args.format == "csv":
        return level_count_csv(levels, args.depth, out.digits)
    f = sample_pl(FunctionTag("tauL"), args.depth)
    tv = total_variation(f)
    ci = coarea_integral(f)
    counts = [upper_set_perimeter(f, t) // 2 for t in levels]
    res = {
        "total_variation": out.rat(tv),
        "coarea_integral": out.rat(ci),
        "coarea_equals_variation": ci == tv,
        "exact_mean_estimate": out.rat(Fraction(3, 4) * ci),
        "note": "grid estimate of the local level set count, not an exact count",
    }
    if levels:
        res["mean_estimate"] = out.rat(Fraction(sum(counts), len(counts)))
        res["mean_estimate_decimal"] = format_value(Fraction(sum(counts), len(counts)), 6)
    return res


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="takagi", description=__doc__.splitlines()[0])
    p.add_argument("--decimal", type=int, metavar="N", help="print rationals as decimals with N places")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("eval", help="tau(x), optionally with partial sums")
    s.add_argument("x")
    s.add_argument("--partial", type=int, metavar="N")
    s.add_argument("--series", type=int, metavar="TERMS")
    s.add_argument("--digit-counts", action="store_true", help="use the digit-count series")
    s.set_defaults(run=cmd_eval)

    s = sub.add_parser("localset", help="the local level set of x")
    s.add_argument("x")
    s.add_argument("--depth", type=int, default=2, help="blocks to flip for uncountable sets")
    s.set_defaults(run=cmd_localset)

    s = sub.add_parser("omega", help="membership in and projection onto Omega^L")
    s.add_argument("action", choices=("check", "project"))
    s.add_argument("x")
    s.set_defaults(run=cmd_omega)

    s = sub.add_parser("breakpoints", help="balanced breakpoints with 2m digits")
    s.add_argument("m", type=int)
    s.add_argument("--cap", type=int, default=12)
    s.add_argument("--format", choices=("json", "csv"), default="json")
    s.set_defaults(run=cmd_breakpoints)

    s = sub.add_parser("gaps", help="gap intervals of Omega^L")
    s.add_argument("--max-2m", type=int, required=True, dest="max_2m")
    s.add_argument("--cap", type=int, default=24)
    s.add_argument("--format", choices=("json", "csv"), default="json")
    s.set_defaults(run=cmd_gaps)

    s = sub.add_parser("level-half", help="x_k with tau(x_k) = 1/2")
    s.add_argument("k", help="natural number or 'inf'")
    s.set_defaults(run=cmd_level_half)

    s = sub.add_parser("family", help="x_k(B) and its level y")
    s.add_argument("B", help="balanced breakpoint p/q")
    s.add_argument("k")
    s.set_defaults(run=cmd_family)

    s = sub.add_parser("sample", help="exact samples on the grid k/2^depth")
    s.add_argument("--function", default="all", help="tauL, tauS, partial:N or all (CSV sweep)")
    s.add_argument("--depth", type=int, required=True)
    s.add_argument("--format", choices=("json", "csv"), default="json")
    s.set_defaults(run=cmd_sample)

    s = sub.add_parser("coarea", help="variation, coarea integral and level-count estimates")
    s.add_argument("--depth", type=int, required=True)
    s.add_argument("--samples", type=int, default=0)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--format", choices=("json", "csv"), default="json")
    s.set_defaults(run=cmd_coarea)
    return p


def _inputs(args) -> dict:
    skip = {"command", "run", "decimal", "format"}
    return {k: str(v) for k, v in vars(args).items() if k not in skip and v is not None and v is not False}


def render(args, results) -> str:
    if isinstance(results, str):
        return results
    if isinstance(results, list):
        return "\n".join(results) + "\n"
    record = {"command": args.command, "inputs": _inputs(args), "results": results}
    return json.dumps(record, indent=2) + "\n"


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        text = render(args, args.run(args, _Out(args)))
    except ResourceError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except (DomainError, ValueError, ZeroDivisionError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
