"""Command-line entry point: ``tensorcert {gen,certify,sweep,verify,fmax}``.

Exit codes: 0 ok, 1 invariant failure, 2 bad input, 3 budget exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__, invariants, report
from .errors import BudgetExceeded, ConvergenceError
from .fmax_estimate import heuristic_fmax
from .spectral import DEFAULT_TOL
from .tensor_model import MODELS, load_tensor, sample_tensor, save_tensor

EXIT_OK, EXIT_INVARIANT, EXIT_BAD_INPUT, EXIT_BUDGET = 0, 1, 2, 3


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _instance_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tensor", help="tensor file written by 'gen'")
    p.add_argument("--n", type=int, help="dimension (with --d, instead of --tensor)")
    p.add_argument("--d", type=int, help="tensor order")
    p.add_argument("--model", default="rademacher", choices=[m for m in MODELS if m != "explicit"])
    p.add_argument("--seed", type=int, help="tensor seed (fresh entropy if omitted)")


def _load_instance(args):
    if args.tensor:
        return load_tensor(args.tensor)
    if args.n is None or args.d is None:
        raise ValueError("give --tensor or both --n and --d")
    return sample_tensor(args.n, args.d, args.model, args.seed)


def cmd_gen(args) -> int:
    if args.n is None or args.d is None:
        raise ValueError("gen needs --n and --d")
    A = sample_tensor(args.n, args.d, args.model, args.seed)
    if not args.out:
        raise ValueError("gen needs --out")
    save_tensor(A, args.out, include_payload=args.payload or None)
    print(json.dumps({"path": args.out, "n": A.dim, "d": A.order, "model": A.model, "seed": A.seed}))
    return EXIT_OK


def cmd_certify(args) -> int:
    A = _load_instance(args)
    q = args.q if args.q is not None else (A.order if A.order % 2 == 0 else 4)
    rep = report.certify(A, q, args.which, tol=args.tol, max_iter=args.max_iter,
                         fmax_restarts=args.restarts, include_timing=args.timing)
    _emit(report.dumps_report(rep), args.out)
    if rep["invariant_violations"]:
        for v in rep["invariant_violations"]:
            print(f"invariant violation: {v}", file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


def _sweep_config(args) -> dict:
    cfg = json.loads(Path(args.config).read_text()) if args.config else {}
    overrides = {"n": args.n, "d": args.d, "q": args.q, "trials": args.trials,
                 "seed_base": args.seed, "model": args.model, "which": args.which,
                 "tol": args.tol, "max_iter": args.max_iter, "fmax_restarts": args.restarts}
    cfg.update({k: v for k, v in overrides.items() if v is not None})
    for key in ("n", "d", "q"):
        if key not in cfg:
            raise ValueError(f"sweep config is missing {key!r}")
    return cfg


def cmd_sweep(args) -> int:
    cfg = _sweep_config(args)
    rows, summary = report.run_sweep(cfg, threads=report.resolve_threads(args.threads))
    if args.format == "csv":
        _emit(report.rows_to_csv(rows), args.out)
    else:
        _emit(report.rows_to_jsonl(rows), args.out)
    summary_text = json.dumps(summary, sort_keys=True, indent=2) + "\n"
    if args.out:
        Path(args.out + ".summary.json").write_text(summary_text)
    else:
        sys.stderr.write(summary_text)
    failed = [r for r in rows if r.get("error")]
    for r in failed:
        print(f"row n={r['n']} q={r['q']} seed={r['seed']}: {r['error']}", file=sys.stderr)
    return EXIT_INVARIANT if any(r.get("invariant_violation") for r in failed) else EXIT_OK


def cmd_verify(args) -> int:
    results = invariants.run_all()
    if args.format == "json":
        _emit(json.dumps([r._asdict() for r in results], indent=2) + "\n", args.out)
    elif args.format == "csv":
        lines = ["suite,name,passed,seconds,message"]
        lines += [f"{r.suite},{r.name},{r.passed},{r.seconds:.6f},{json.dumps(r.message)}"
                  for r in results]
        _emit("\n".join(lines) + "\n", args.out)
    else:
        _emit(invariants.format_table(results) + "\n", args.out)
    return EXIT_OK if all(r.passed for r in results) else EXIT_INVARIANT


def cmd_fmax(args) -> int:
    A = _load_instance(args)
    est = heuristic_fmax(A, restarts=args.restarts, max_iter=args.max_iter or 500,
                         tol=args.tol, seed=args.solver_seed)
    doc = {"value": est.value, "argmax": est.argmax.tolist(), "restarts": est.restarts,
           "iterations": est.iterations, "converged": est.converged,
           "instance": {"n": A.dim, "d": A.order, "model": A.model, "seed": A.seed}}
    _emit(json.dumps(doc, sort_keys=True, indent=2) + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tensorcert", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"tensorcert {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="sample a random tensor and write it to a file")
    g.add_argument("--n", type=int)
    g.add_argument("--d", type=int)
    g.add_argument("--model", default="rademacher", choices=[m for m in MODELS if m != "explicit"])
    g.add_argument("--seed", type=int)
    g.add_argument("--out")
    g.add_argument("--payload", action="store_true", help="store entries, not just the seed")
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("certify", help="certify bounds on one tensor")
    _instance_args(c)
    c.add_argument("--q", type=int, help="relaxation degree (default: d, or 4 when d=3)")
    c.add_argument("--which", default="upper", choices=["upper", "lower", "both"])
    c.add_argument("--tol", type=float, default=DEFAULT_TOL)
    c.add_argument("--max-iter", type=int)
    c.add_argument("--restarts", type=int, default=50, help="fmax estimate restarts")
    c.add_argument("--timing", action="store_true", help="add timestamp and timings (not byte-stable)")
    c.add_argument("--out")
    c.add_argument("--format", choices=["json"], default="json")
    c.set_defaults(func=cmd_certify)

    s = sub.add_parser("sweep", help="run a grid of instances")
    s.add_argument("config", nargs="?", help="JSON config file")
    s.add_argument("--n", type=int, nargs="+")
    s.add_argument("--d", type=int)
    s.add_argument("--q", type=int, nargs="+")
    s.add_argument("--trials", type=int)
    s.add_argument("--seed", type=int, help="seed base; trial t uses seed + t")
    s.add_argument("--model", choices=[m for m in MODELS if m != "explicit"])
    s.add_argument("--which", choices=["upper", "lower", "both"])
    s.add_argument("--tol", type=float)
    s.add_argument("--max-iter", type=int)
    s.add_argument("--restarts", type=int)
    s.add_argument("--threads", type=int, help="worker threads (overrides TSC_THREADS)")
    s.add_argument("--out")
    s.add_argument("--format", choices=["json", "csv"], default="json")
    s.set_defaults(func=cmd_sweep)

    v = sub.add_parser("verify", help="run the invariant suites")
    v.add_argument("--out")
    v.add_argument("--format", choices=["json", "csv"], default=None)
    v.set_defaults(func=cmd_verify)

    f = sub.add_parser("fmax", help="heuristic sphere maximum (not certified)")
    _instance_args(f)
    f.add_argument("--restarts", type=int, default=50)
    f.add_argument("--max-iter", type=int)
    f.add_argument("--tol", type=float, default=1e-10)
    f.add_argument("--solver-seed", type=int, default=0)
    f.add_argument("--out")
    f.add_argument("--format", choices=["json"], default="json")
    f.set_defaults(func=cmd_fmax)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ConvergenceError as exc:
        print(f"solver failed: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (ValueError, OSError, KeyError) as exc:
        print(f"bad input: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
