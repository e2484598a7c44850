"""signbound command line: bounds, verify, optimize, lp and table subcommands.

Exit codes: 0 success, 1 an inequality or certificate check failed,
2 usage error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from . import bounds, radial
from .numerics import QuadratureError
from .simplex import LpSolverError

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3
THREADS_ENV = "SIGNBOUND_THREADS"


class UsageError(Exception):
    pass


def parse_dims(spec: str) -> list[int]:
    """'1..16', '3-5', '1,2,8' or '12'; a reversed range is empty."""
    spec = str(spec).strip()
    if not spec:
        return []
    out: list[int] = []
    for part in spec.split(","):
        part = part.strip()
        for sep in ("..", "-", ":"):
            if sep in part:
                a, b = part.split(sep, 1)
                lo, hi = int(a), int(b)
                out.extend(range(lo, hi + 1))
                break
        else:
            out.append(int(part))
    if any(d < 1 for d in out):
        raise UsageError(f"dimensions must be positive: {spec!r}")
    return out


def _read_config(path: str) -> dict:
    cfg = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            k, v = (x.strip() for x in line.split("=", 1))
            cfg[k.replace("-", "_")] = v
    return cfg


def _fmt(v):
    if isinstance(v, float):
        return repr(v) if math.isfinite(v) else ("inf" if v > 0 else "-inf" if v < 0 else "nan")
    return v


def _csv(header, rows) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    return out.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _pmap(func, items, threads):
    # results come back in input order whatever the completion order
    if threads <= 1:
        return [func(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, items))


def _require_seed(args):
    if args.seed is None:
        raise UsageError(f"'{args.command}' is stochastic: --seed is required")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_bounds(args) -> tuple[str, int]:
    reports = [bounds.bounds_report(d) for d in parse_dims(args.dims)]
    if args.format == "json":
        return _json([r.to_dict() for r in reports]), EXIT_OK
    return _csv(bounds.BoundsReport.csv_header(), [r.csv_row() for r in reports]), EXIT_OK


def cmd_verify(args) -> tuple[str, int]:
    from .verify import reports_to_jsonl, verify_batch

    _require_seed(args)
    rows, summary, failures = [], [], []
    for d in parse_dims(args.dims):
        batch = list(verify_batch(args.seed, d, args.count, args.law, args.degree, args.threads))
        rows.extend(batch)
        reps = [r for _, _, r in batch]
        bad = [(i, f, r) for i, f, r in batch if not r.passed]
        failures.extend(bad)
        summary.append({
            "dim": d,
            "law": args.law,
            "count": len(reps),
            "failures": len(bad),
            "max_ratio": max((r.ratio for r in reps), default=float("nan")),
            "bound": math.exp(bounds.theorem2_constant(d)),
            "min_slack": min((r.slack for r in reps), default=float("nan")),
            "max_holder_residual": max((r.holder_residual for r in reps), default=float("nan")),
            "max_hy_residual": max((r.hy_residual for r in reps), default=float("nan")),
            "max_logconvex_residual": max((r.logconvex_residual for r in reps), default=float("nan")),
            "max_combined_residual": max((r.combined_residual for r in reps), default=float("nan")),
        })
    if args.jsonl:
        with open(args.jsonl, "w", encoding="utf-8") as fh:
            fh.write(reports_to_jsonl(rows))
    for i, f, r in failures:
        sys.stderr.write(json.dumps({"index": i, "function": f.to_dict(), "report": r.to_dict()},
                                    sort_keys=True) + "\n")
    if args.format == "json":
        text = _json(summary)
    else:
        text = _csv(list(summary[0]) if summary else ["dim"], [list(s.values()) for s in summary])
    return text, EXIT_CHECK if failures else EXIT_OK


def cmd_optimize(args) -> tuple[str, int]:
    from .optimize import maximize_ratio

    _require_seed(args)
    dims = parse_dims(args.dims)
    results = [maximize_ratio(d, args.degree, args.budget, args.restarts, args.seed, args.threads) for d in dims]
    if args.format == "json":
        return _json([r.to_dict() for r in results]), EXIT_OK
    header = ["dim", "degree", "ratio", "gaussian_ratio", "bound", "restarts", "iterations", "seed"]
    return _csv(header, [[getattr(r, k) for k in header] for r in results]), EXIT_OK


def _lp_one(d, N, tol):
    from .lp import audit, minimal_r

    cert = minimal_r(d, N, tol)
    return cert, audit(cert)


def cmd_lp(args) -> tuple[str, int]:
    from .lp import certificates_to_csv

    dims = parse_dims(args.dims)
    out = _pmap(lambda d: _lp_one(d, args.degree, args.tol), dims, args.threads)
    certs = [c for c, _ in out]
    failed = any(not a.ok for _, a in out)
    if args.format == "json":
        text = _json([{"certificate": c.to_dict(), "audit": a.to_dict()} for c, a in out])
    else:
        text = certificates_to_csv(certs)
    return text, EXIT_CHECK if failed else EXIT_OK


def cmd_table(args) -> tuple[str, int]:
    from .lp import minimal_r
    from .optimize import maximize_ratio

    _require_seed(args)
    dims = parse_dims(args.dims)

    def row(d):
        b = bounds.bounds_report(d)
        cert = minimal_r(d, args.degree, args.tol)
        opt = maximize_ratio(d, args.opt_degree, args.budget, args.restarts, args.seed, 1)
        return [d, b.a_lower, b.threshold_ok, b.delta_lp_lower, cert.r_star, cert.density_bound, cert.status,
                opt.ratio, opt.gaussian_ratio, opt.bound]

    rows = _pmap(row, dims, args.threads)
    header = ["dim", "a_lower", "threshold_ok", "delta_lp_lower", "lp_r_star", "lp_density_bound", "lp_status",
              "opt_ratio", "gaussian_ratio", "ratio_bound"]
    if args.format == "json":
        return _json([dict(zip(header, r)) for r in rows]), EXIT_OK
    return _csv(header, rows), EXIT_OK


COMMANDS = {"bounds": cmd_bounds, "verify": cmd_verify, "optimize": cmd_optimize, "lp": cmd_lp, "table": cmd_table}


def _positive_int(s):
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {s}")
    return v


def _nonneg_int(s):
    v = int(s)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {s}")
    return v


def _positive_float(s):
    v = float(s)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {s}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--dims", default="1..8", help="dimensions: '1..16', '3-5', '1,2,8' or '12' (default 1..8)")
    common.add_argument("--degree", type=_nonneg_int, default=None,
                        help="basis degree N (verify 8, optimize 12, lp/table 16)")
    common.add_argument("--budget", type=_positive_int, default=None,
                        help="optimizer iterations shared by all restarts (optimize 1000, table 200)")
    common.add_argument("--restarts", type=_positive_int, default=None, help="optimizer restarts (optimize 32, table 4)")
    common.add_argument("--seed", type=int, default=None, help="random seed; required by verify, optimize, table")
    common.add_argument("--tol", type=_positive_float, default=1e-4, help="LP bisection tolerance on r (1e-4)")
    common.add_argument("--quad-order", type=_positive_int, default=radial.DEFAULT_ORDER,
                        help=f"Gauss-Laguerre order for sampled profiles ({radial.DEFAULT_ORDER})")
    common.add_argument("--format", choices=("csv", "json"), default="csv", help="output format (csv)")
    common.add_argument("--out", default=None, help="write output here instead of stdout")
    common.add_argument("--threads", type=_positive_int, default=None,
                        help=f"worker threads (default from ${THREADS_ENV}, else 1)")
    common.add_argument("--config", default=None, help="key=value file preloading any flag; flags win")

    p = argparse.ArgumentParser(prog="signbound", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("bounds", parents=[common], help="closed-form constants per dimension")
    v = sub.add_parser("verify", parents=[common], help="check the inequality chain on random expansions")
    v.add_argument("--count", type=_positive_int, default=100, help="functions per dimension (100)")
    v.add_argument("--law", choices=("normal", "decaying", "sparse"), default="normal", help="coefficient law")
    v.add_argument("--jsonl", default=None, help="also write one JSON report per function here")
    sub.add_parser("optimize", parents=[common], help="maximize the L2/(L1 x L1) ratio")
    sub.add_parser("lp", parents=[common], help="minimal LP radius and audited certificate")
    t = sub.add_parser("table", parents=[common], help="combined per-dimension table")
    t.add_argument("--opt-degree", type=_nonneg_int, default=8, help="optimizer basis degree in the table (8)")
    p.subcommands = sub.choices
    return p


_DEFAULTS = {
    "verify": {"degree": 8},
    "optimize": {"degree": 12, "budget": 1000, "restarts": 32},
    "lp": {"degree": 16},
    "table": {"degree": 16, "budget": 200, "restarts": 4},
}


def parse_args(argv=None) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        cfg = _read_config(args.config)
        sub = parser.subcommands[args.command]
        actions = {a.dest: a for a in sub._actions}
        unknown = sorted(set(cfg) - set(actions) - {"config", "help"})
        if unknown:
            raise UsageError(f"unknown config keys: {unknown}")
        preset = {}
        for k, raw in cfg.items():
            a = actions[k]
            try:
                val = a.type(raw) if a.type is not None else raw
            except (ValueError, argparse.ArgumentTypeError) as exc:
                raise UsageError(f"config key {k}: {exc}") from None
            if a.choices is not None and val not in a.choices:
                raise UsageError(f"config key {k}: {val!r} not in {list(a.choices)}")
            preset[k] = val
        # config values become defaults, so explicit flags still win
        sub.set_defaults(**preset)
        args = parser.parse_args(argv)
    for k, v in _DEFAULTS.get(args.command, {}).items():
        if getattr(args, k, None) is None:
            setattr(args, k, v)
    if args.threads is None:
        env = os.environ.get(THREADS_ENV)
        try:
            args.threads = int(env) if env else 1
        except ValueError:
            raise UsageError(f"${THREADS_ENV} must be an integer, got {env!r}") from None
        if args.threads < 1:
            raise UsageError(f"${THREADS_ENV} must be positive")
    return args


def main(argv=None) -> int:
    try:
        args = parse_args(argv)
    except UsageError as exc:
        sys.stderr.write(f"signbound: usage error: {exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:  # argparse
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    saved_order, radial.DEFAULT_ORDER = radial.DEFAULT_ORDER, args.quad_order
    try:
        text, code = COMMANDS[args.command](args)
    except UsageError as exc:
        sys.stderr.write(f"signbound: usage error: {exc}\n")
        return EXIT_USAGE
    except ValueError as exc:
        sys.stderr.write(f"signbound: usage error: {exc}\n")
        return EXIT_USAGE
    except (LpSolverError, QuadratureError, FloatingPointError, ArithmeticError) as exc:
        sys.stderr.write(f"signbound: numerical failure: {exc}\n")
        return EXIT_NUMERIC
    except RuntimeError as exc:
        # BracketError, BoundViolation and friends
        name = type(exc).__name__
        code = EXIT_CHECK if name == "BoundViolation" else EXIT_NUMERIC
        sys.stderr.write(f"signbound: {name}: {exc}\n")
        return code
    finally:
        radial.DEFAULT_ORDER = saved_order
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
