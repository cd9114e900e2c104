"""Command-line front door: subcommand routing, file I/O, JSON/CSV reports.

Exit codes: 0 success, 2 input error, 3 falsification event (a runtime
check of a proven inequality failed; distinguished so CI can tell bad input
from a mathematical surprise or overly aggressive constants).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from typing import Any, Optional

import numpy as np

from . import __version__
from .construct import (
    BaseSet,
    bi_sphere_construction,
    growth_table,
    product_construction,
    sphere_construction,
    verify_free,
)
from .core import (
    Ambient,
    embed_torus,
    load_skewset,
    save_skewset,
)
from .errors import FalsificationError, SkewLabError
from .fourier import (
    AnalysisConfig,
    Progression,
    TwoDFunction,
    check_gvn,
    dichotomy_report,
    lambda_form,
    parseval_bound,
)
from .increment import increment_step, product_set_experiment
from .search import DEFAULT_BUDGET, find_base_set, max_skew_corner_free
from .verify import (
    count_skew_corners_fft,
    count_skew_corners_naive,
    find_skew_corner,
    is_bi_skew_corner_free,
)

GROWTH_CSV_COLUMNS = ["n", "size", "density", "fitted_c", "m", "d", "r", "t"]


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {
            f.name: _jsonable(getattr(obj, f.name))
            for f in dataclasses.fields(obj)
        }
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def _emit(report: dict, out: Optional[str] = None) -> None:
    text = json.dumps(_jsonable(report), indent=2) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _prog_dict(p: Optional[Progression]) -> Optional[dict]:
    if p is None:
        return None
    return {
        "start": p.start,
        "difference": p.difference,
        "length": p.length,
        "span": p.span,
    }


def _witness_dict(w) -> Optional[dict]:
    if w is None:
        return None
    return {"x": w.x, "y": w.y, "y_prime": w.y_prime, "d": w.d}


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------

def _cmd_verify(args) -> int:
    a = load_skewset(args.infile)
    w = find_skew_corner(a)
    report = {"free": w is None, "witness": _witness_dict(w)}
    if args.bi:
        report["bi_free"] = is_bi_skew_corner_free(a)
    _emit(report, args.report)
    return 0


def _cmd_count(args) -> int:
    a = load_skewset(args.infile)
    if args.method == "naive":
        c = count_skew_corners_naive(a)
        torus_counts = a.ambient.kind == "torus"
        N = a.ambient.size
    else:
        c = count_skew_corners_fft(a)
        torus_counts = True
        N = a.ambient.size if a.ambient.kind == "torus" else 2 * a.ambient.size
    report = {
        "trivial": c.trivial,
        "nontrivial": c.nontrivial,
        "total": c.total,
        "lambda": c.total / N**4 if torus_counts else None,
    }
    _emit(report, args.report)
    return 0


def _cmd_construct(args) -> int:
    if args.family == "sphere":
        build = bi_sphere_construction if args.bi else sphere_construction
        a, params = build(args.n)
        verified = False
        if not args.no_verify:
            verified = verify_free(a, seed=args.seed)
        import math

        lg = math.log2(args.n)
        report = {
            "family": "sphere",
            "n": args.n,
            "bi": args.bi,
            "params": {"m": params.m, "d": params.d, "r": params.r, "t": params.t},
            "size": len(a),
            "density": a.density,
            "fitted_c": (2 * lg - math.log2(len(a))) / math.sqrt(lg),
            "verified": verified,
        }
    else:
        if args.base:
            base_points = load_skewset(args.base)
            base = BaseSet(base_points.ambient.size, base_points)
        else:
            base = find_base_set(6)
        a = product_construction(
            base, args.n, verify=True if args.force_verify else None
        )
        k = 0
        while base.b ** (k + 1) <= args.n:
            k += 1
        report = {
            "family": "product",
            "n": args.n,
            "base_b": base.b,
            "base_size": len(base),
            "k": k,
            "size": len(a),
            "density": a.density,
            "verified": bool(args.force_verify or args.n <= 64),
        }
    if args.out:
        save_skewset(a, args.out)
        report["out"] = args.out
    _emit(report, args.report)
    return 0


def _parse_exps(spec: str) -> list[int]:
    parts = spec.split("..")
    if len(parts) not in (2, 3):
        raise SkewLabError(f"bad exponent range {spec!r}; expected A..B[..STEP]")
    try:
        a, b = int(parts[0]), int(parts[1])
        step = int(parts[2]) if len(parts) == 3 else 1
    except ValueError as exc:
        raise SkewLabError(f"bad exponent range {spec!r}") from exc
    if step < 1 or b < a:
        raise SkewLabError(f"bad exponent range {spec!r}")
    return list(range(a, b + 1, step))


def _cmd_growth(args) -> int:
    ns = [2**e for e in _parse_exps(args.exps)]
    rows = growth_table(ns, bi=args.bi)
    if args.format == "csv":
        lines = [",".join(GROWTH_CSV_COLUMNS)]
        for r in rows:
            lines.append(
                f"{r.n},{r.size},{r.density!r},{r.fitted_c!r},"
                f"{r.params.m},{r.params.d},{r.params.r},{r.params.t}"
            )
        text = "\n".join(lines) + "\n"
        if args.report:
            with open(args.report, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    else:
        _emit({"rows": rows}, args.report)
    return 0


def _cmd_search(args) -> int:
    ambient = Ambient(args.ambient, args.size)
    res = max_skew_corner_free(
        ambient,
        budget=args.budget,
        mode="bi_skew" if args.bi else "skew",
        symmetry=not args.no_symmetry,
    )
    report = {
        "ambient": {"kind": ambient.kind, "size": ambient.size},
        "mode": res.mode,
        "best_size": res.best_size,
        "optimal": res.optimal,
        "nodes_explored": res.nodes_explored,
        "budget_exhausted": res.budget_exhausted,
    }
    if args.out:
        save_skewset(res.witness, args.out)
        report["out"] = args.out
    _emit(report, args.report)
    return 0


def _cmd_diagnose(args) -> int:
    a = load_skewset(args.infile)
    if args.check == "gvn":
        g = check_gvn(a if a.ambient.kind == "torus" else embed_torus(a))
        report = {
            "check": "gvn",
            "alpha": g.alpha,
            "lambda": g.lam,
            "max_nontrivial_coeff": g.max_nontrivial_coeff,
            "inequality_holds": g.inequality_holds,
            "guaranteed_count": g.guaranteed_count,
        }
    elif args.check == "dichotomy":
        d = dichotomy_report(a)
        report = {
            "check": "dichotomy",
            "alpha": d.alpha,
            "lhs": d.lhs,
            "branch": d.branch,
            "small_density_threshold": d.small_density_threshold,
            "mass_threshold": d.mass_threshold,
        }
    elif args.check == "parseval":
        p = parseval_bound(a)
        report = {
            "check": "parseval",
            "full_sum": p.full_sum,
            "nontrivial_sum": p.nontrivial_sum,
            "nonempty_columns": p.nonempty_columns,
            "modulus": p.modulus,
        }
    else:
        ind = TwoDFunction.indicator(a)
        lam = lambda_form(ind, ind, ind)
        c = count_skew_corners_fft(a)
        N = ind.modulus
        report = {
            "check": "lambda",
            "lambda": lam,
            "n4_lambda": lam * N**4,
            "count_total": c.total,
            "relative_gap": abs(lam * N**4 - c.total) / max(c.total, 1),
        }
    _emit(report, args.report)
    return 0


def _outcome_dict(out) -> dict:
    return {
        "variant": out.variant,
        "branch": out.branch,
        "alpha": out.alpha,
        "n": out.n,
        "nprime": out.n_prime,
        "density": out.density,
        "count": out.extracted_count,
        "box_area": out.box_area,
        "m": len(out.gamma_set) if out.gamma_set is not None else None,
        "progression": _prog_dict(out.progression),
        "translate": _prog_dict(out.translate),
        "note": out.note,
    }


def _cmd_increment(args) -> int:
    a = load_skewset(args.infile)
    config = AnalysisConfig(C=args.C, c_prime=args.cprime)
    mode = args.mode.replace("-", "_")
    steps = []
    cur = a
    final = None
    for _ in range(args.iterations):
        out = increment_step(cur, config=config, mode=mode)
        steps.append(_outcome_dict(out))
        final = out
        if out.variant != "subsquare" or out.extracted is None:
            break
        if out.n_prime == cur.ambient.size and len(out.extracted) == len(cur):
            break  # no progress; stop the exploration loop
        cur = out.extracted
    report = steps[0] if args.iterations == 1 else {"steps": steps}
    if args.out and final is not None and final.extracted is not None:
        save_skewset(final.extracted, args.out)
        if isinstance(report, dict):
            report["out"] = args.out
    _emit(report, args.report)
    return 0


def _cmd_experiment(args) -> int:
    rep = product_set_experiment(args.beta, args.N, args.trials, args.seed)
    _emit(dataclasses.asdict(rep), args.report)
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="skewlab",
        description="Skew-corner-free sets: construct, verify, count, "
        "search, diagnose, increment, experiment.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument(
        "--threads",
        type=int,
        default=int(os.environ.get("SKEWLAB_THREADS", "0") or 0),
        help="reserved; results are schedule-independent (falls back to "
        "SKEWLAB_THREADS)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_report(p):
        p.add_argument("--report", help="write the JSON report here instead of stdout")
        p.add_argument(
            "--json", action="store_true",
            help="accepted for compatibility; reports are JSON by default",
        )

    p = sub.add_parser("verify", help="check a skewset file for skew corners")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--bi", action="store_true", help="also check the transpose")
    add_report(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("count", help="count skew-corner tuples")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--method", choices=["naive", "fft"], default="fft")
    add_report(p)
    p.set_defaults(func=_cmd_count)

    p = sub.add_parser("construct", help="build a skew-corner-free set")
    fam = p.add_subparsers(dest="family", required=True)
    ps = fam.add_parser("sphere", help="sphere pair construction")
    ps.add_argument("--n", type=int, required=True)
    ps.add_argument("--bi", action="store_true")
    ps.add_argument("--out", help="write the set as a skewset file")
    ps.add_argument("--seed", type=int, default=0, help="seed for witness probes")
    ps.add_argument("--no-verify", action="store_true")
    add_report(ps)
    ps.set_defaults(func=_cmd_construct)
    pp = fam.add_parser("product", help="digit product construction")
    pp.add_argument("--n", type=int, required=True)
    pp.add_argument("--base", help="skewset file with the base set "
                    "(default: search the torus of side 6)")
    pp.add_argument("--out")
    pp.add_argument("--force-verify", action="store_true")
    add_report(pp)
    pp.set_defaults(func=_cmd_construct)

    p = sub.add_parser("growth", help="construction sizes over n = 2^e")
    p.add_argument("--exps", required=True, help="exponent range A..B[..STEP]")
    p.add_argument("--bi", action="store_true")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    add_report(p)
    p.set_defaults(func=_cmd_growth)

    p = sub.add_parser("search", help="exact extremal search")
    p.add_argument("--ambient", choices=["grid", "torus"], required=True)
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--bi", action="store_true")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--no-symmetry", action="store_true")
    p.add_argument("--out", help="write the witness as a skewset file")
    add_report(p)
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("diagnose", help="spectral checks on a set")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument(
        "--check", choices=["gvn", "dichotomy", "parseval", "lambda"],
        required=True,
    )
    add_report(p)
    p.set_defaults(func=_cmd_diagnose)

    p = sub.add_parser("increment", help="density increment step(s)")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument(
        "--mode", choices=["guaranteed", "best-effort", "best_effort"],
        default="best-effort",
    )
    p.add_argument("--C", type=float, default=64.0)
    p.add_argument("--cprime", type=float, default=0.05)
    p.add_argument("--iterations", type=int, default=1)
    p.add_argument("--out", help="write the final extracted set here")
    add_report(p)
    p.set_defaults(func=_cmd_increment)

    p = sub.add_parser("experiment", help="numerical experiments")
    exp = p.add_subparsers(dest="experiment", required=True)
    pe = exp.add_parser("product-set", help="skew corners of random product sets")
    pe.add_argument("--beta", type=float, required=True)
    pe.add_argument("--N", type=int, required=True)
    pe.add_argument("--trials", type=int, required=True)
    pe.add_argument("--seed", type=int, required=True)
    add_report(pe)
    pe.set_defaults(func=_cmd_experiment)

    return parser


def run(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except FalsificationError as exc:
        print(f"falsification event: {exc}", file=sys.stderr)
        return 3
    except SkewLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
