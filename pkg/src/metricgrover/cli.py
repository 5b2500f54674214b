"""Command-line harness.

Subcommands: ``grover``, ``metric``, ``kraus``, ``block``, ``sweep`` and
``verify``. Exit codes: 0 success, 1 validation or usage error, 2 failed
verification or a sweep with failed grid points.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone

import numpy as np

from . import __version__, blockenc, grover, kraus, metric, verify
from .errors import MetricGroverError
from .problem import new_problem, parse_solutions, random_solutions

CSV_COLUMNS = (
    "n", "N", "M", "phi", "convention", "theta", "g00", "lambda", "p_norm",
    "branch_prob", "total_success", "rounds", "oracle_calls", "shots",
    "branch_successes", "solution_successes", "seed", "error",
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return float(f"{float(x):.12g}")
    return x


def _csv_value(x):
    if x is None:
        return ""
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def _parse_phi(text, p):
    if text == "optimal":
        return metric.optimal_phi(p)
    try:
        return float(text)
    except ValueError as exc:
        raise UsageError(f"--phi: expected radians or 'optimal', got {text!r}") from exc


def _int_range(text, flag):
    """``"4:10"`` (inclusive), ``"4,5,7"`` or ``""`` (empty)."""
    text = text.strip()
    try:
        if not text:
            return []
        if ":" in text:
            lo, hi = text.split(":")
            return list(range(int(lo), int(hi) + 1))
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise UsageError(f"{flag}: bad integer range {text!r}") from exc


def _metric_results(p, phi):
    m = metric.metric_params(p, phi)
    return m, {"theta": m.theta, "phi": phi, "g00": m.g00, "lambda": m.lam}


def _grover_results(p, args):
    if args.iters == "auto":
        k = grover.optimal_iterations(p)
    else:
        try:
            k = int(args.iters)
        except ValueError as exc:
            raise UsageError(f"--iters: expected integer or 'auto', got {args.iters!r}") from exc
    s = grover.grover_iterate(p, k)
    return {
        "theta": grover.theta(p).theta,
        "iters": k,
        "oracle_calls": k,
        "success_prob": grover.success_probability(p, s),
        "closed_form_prob": grover.closed_form_probability(p, k),
    }


def _metric_cmd(p, args):
    phi = _parse_phi(args.phi, p)
    _, res = _metric_results(p, phi)
    s = metric.single_shot(p, phi)
    res["solution_prob"] = grover.success_probability(p, s)
    res["output_norm"] = s.norm()
    res["oracle_calls"] = 1
    return res


def _kraus_cmd(p, args, seed=None):
    phi = _parse_phi(args.phi, p)
    m, res = _metric_results(p, phi)
    k = kraus.kraus_pair(m, args.convention)
    res["p_norm"] = k.p_norm
    res["branch_prob"] = kraus.branch_probability(k, p)
    res["total_success"] = kraus.total_success(p, phi, k.convention)
    if args.shots > 0:
        stats = kraus.sample_shots(
            p, phi, k.convention, args.shots, args.seed if seed is None else seed,
            workers=getattr(args, "workers", 1),
        )
        res.update(
            shots=stats.shots,
            branch_successes=stats.branch_successes,
            solution_successes=stats.solution_successes,
            empirical_p_branch=stats.empirical_p_branch,
            empirical_p_total=stats.empirical_p_total,
        )
    return res


def _block_cmd(p, args):
    phi = _parse_phi(args.phi, p)
    m, res = _metric_results(p, phi)
    k = kraus.kraus_pair(m, kraus.Convention.FULL)
    rounds, ledger = blockenc.rounds_needed(p, phi, args.target)
    res.update(
        p_norm=k.p_norm,
        branch_prob=blockenc.flag_probability(p, phi),
        rounds=rounds,
        oracle_calls=ledger.oracle_calls,
        walk_steps=ledger.walk_steps,
        reflections=ledger.reflections,
        total_success=blockenc.amplified_success(p, phi, rounds),
        degree=blockenc.degree_for_error(k.p_norm, args.epsilon),
    )
    return res


def _config(args, p=None):
    cfg = {"command": args.command}
    for key in ("n", "solutions", "phi", "convention", "shots", "seed", "epsilon", "target", "iters"):
        if hasattr(args, key):
            cfg[key] = getattr(args, key)
    if p is not None:
        cfg["resolved_solutions"] = list(p.solutions)
    return cfg


def _record(args, results, p=None):
    rec = {
        "config": {k: _fmt(v) for k, v in _config(args, p).items()},
        "results": {k: _fmt(v) for k, v in results.items()},
        "version": __version__,
    }
    if args.stamp:
        rec["timestamp"] = datetime.now(timezone.utc).isoformat()
    return rec


def _row_from(p, args, res, seed, error=""):
    row = dict.fromkeys(CSV_COLUMNS)
    row.update(
        n=p.n if p else None, N=p.N if p else None, M=p.M if p else None,
        convention=getattr(args, "convention", None), seed=seed, error=error or None,
    )
    for key in ("phi", "theta", "g00", "lambda", "p_norm", "branch_prob", "total_success",
                "rounds", "oracle_calls", "shots", "branch_successes", "solution_successes"):
        if key in res:
            row[key] = _fmt(res[key])
    if "iters" in res:
        row["rounds"] = res["iters"]
        row["total_success"] = _fmt(res["success_prob"])
    return row


def _write_csv(rows, out):
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _csv_value(v) for k, v in row.items()})
    _emit(buf.getvalue(), out)


def _emit(text, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _single(args, fn):
    p = parse_solutions(args.n, args.solutions)
    res = fn(p, args)
    if args.format == "csv":
        _write_csv([_row_from(p, args, res, args.seed)], args.out)
    else:
        _emit(json.dumps(_record(args, res, p), indent=2) + "\n", args.out)
    return 0


def _sweep_point(args, index, n, m, phi_text):
    seed = int(np.random.SeedSequence(args.seed, spawn_key=(index,)).generate_state(1)[0])
    p = None
    res = {"phi": None}
    try:
        p = new_problem(n, random_solutions(n, m, seed, exclude_zero=not args.allow_zero))
        if args.mode == "grover":
            args_k = argparse.Namespace(iters="auto")
            res = _grover_results(p, args_k)
        elif args.mode == "kraus":
            res = _kraus_cmd(p, args, seed=seed)
        else:
            res = _block_cmd(p, args)
        if args.mode != "grover":
            res["phi"] = _parse_phi(phi_text, p)
        return _row_from(p, args, res, seed)
    except (MetricGroverError, ValueError, UsageError) as exc:
        row = _row_from(p, args, {}, seed, error=f"{type(exc).__name__}: {exc}")
        if p is None:
            row.update(n=n, N=1 << n if n >= 0 else None, M=m)
        return row


def _sweep(args):
    grid = [
        (n, m, phi)
        for n in _int_range(args.n, "--n")
        for m in _int_range(args.m, "--m")
        for phi in [t for t in args.phi.split(",") if t.strip()]
    ]
    jobs = [(args, i, *point) for i, point in enumerate(grid)]
    if args.workers > 1:
        with ThreadPoolExecutor(max_workers=args.workers) as pool:
            rows = list(pool.map(lambda job: _sweep_point(*job), jobs))
    else:
        rows = [_sweep_point(*job) for job in jobs]
    _write_csv(rows, args.out)
    return 2 if any(r["error"] for r in rows) else 0


def _verify(args):
    results = verify.run_all()
    if args.format == "json":
        payload = [{"check": name, "ok": ok, "detail": detail} for name, ok, detail in results]
        _emit(json.dumps({"checks": payload, "version": __version__}, indent=2) + "\n", args.out)
    else:
        lines = [f"{'PASS' if ok else 'FAIL'}  {name}  ({detail})" for name, ok, detail in results]
        _emit("\n".join(lines) + "\n", args.out)
    return 0 if all(ok for _, ok, _ in results) else 2


def build_parser():
    parser = _Parser(prog="metricgrover", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, fmt_default="json"):
        sp.add_argument("--out", default=None, help="output path (default stdout)")
        sp.add_argument("--format", choices=("json", "csv"), default=fmt_default)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--stamp", action="store_true", help="add a UTC timestamp to JSON records")

    def problem_flags(sp):
        sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--solutions", required=True, help="comma list or random:M:seed")

    sp = sub.add_parser("grover", help="standard Grover iterations")
    problem_flags(sp)
    sp.add_argument("--iters", default="auto")
    common(sp)

    for name, help_text in (("metric", "single-shot generalized diffusion"),
                            ("kraus", "post-selection (Kraus) realization"),
                            ("block", "block encoding with flag amplification")):
        sp = sub.add_parser(name, help=help_text)
        problem_flags(sp)
        sp.add_argument("--phi", default="optimal")
        sp.add_argument("--convention", choices=("paper", "full"), default="paper")
        sp.add_argument("--shots", type=int, default=0)
        sp.add_argument("--epsilon", type=float, default=1e-3)
        sp.add_argument("--target", type=float, default=0.99)
        common(sp)

    sp = sub.add_parser("sweep", help="grid sweep to CSV")
    sp.add_argument("--mode", choices=("grover", "kraus", "block"), default="kraus")
    sp.add_argument("--n", default="4:10", help="inclusive range lo:hi or comma list")
    sp.add_argument("--m", default="1")
    sp.add_argument("--phi", default="optimal", help="comma list of radians or 'optimal'")
    sp.add_argument("--convention", choices=("paper", "full"), default="paper")
    sp.add_argument("--shots", type=int, default=0)
    sp.add_argument("--epsilon", type=float, default=1e-3)
    sp.add_argument("--target", type=float, default=0.99)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--allow-zero", action="store_true",
                    help="allow index 0 in randomly drawn solution sets")
    sp.add_argument("--out", default=None)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(format="csv", stamp=False)

    sp = sub.add_parser("verify", help="run the built-in identity and oracle checks")
    sp.add_argument("--out", default=None)
    sp.add_argument("--format", choices=("text", "json"), default="text")
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", metric.AdvantageWarning)
            if args.command == "grover":
                return _single(args, _grover_results)
            if args.command == "metric":
                return _single(args, _metric_cmd)
            if args.command == "kraus":
                if args.shots < 0:
                    raise UsageError("--shots must be >= 0")
                return _single(args, _kraus_cmd)
            if args.command == "block":
                return _single(args, _block_cmd)
            if args.command == "sweep":
                return _sweep(args)
            return _verify(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (MetricGroverError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
