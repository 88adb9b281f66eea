"""
MUBTRIO verify - run the numeric verifiers and write their reports
"""
from pathlib import Path

from models import GridSpec
from services.mub import (
    SYMMETRIC_CASES, verify_eighteen_contradiction, verify_relabelings, verify_symmetric_minus_one
)


def register(subparsers) -> None:
    parser = subparsers.add_parser("verify", help="numeric verifiers")
    parser.add_argument("which", choices=["eighteen", "symmetric", "relabel"])
    grid = parser.add_argument_group("eighteen grid")
    grid.add_argument("--resolution", type=int, default=None)
    grid.add_argument("--polish-iters", type=int, default=None)
    grid.add_argument("--max-polish", type=int, default=None,
                      help="refine only this many near-solutions (default: all)")
    grid.add_argument("--screen", type=float, default=None)
    grid.add_argument("--workers", type=int, default=None)
    parser.add_argument("--samples", type=int, default=None)
    parser.add_argument("--out", type=Path, default=None, help="write the report as JSON")
    parser.set_defaults(handler=handle)


def _grid(args) -> GridSpec:
    overrides = {
        "resolution": args.resolution,
        "polish_iters": args.polish_iters,
        "max_polish": args.max_polish,
        "screen": args.screen,
        "workers": args.workers,
    }
    return GridSpec(**{k: v for k, v in overrides.items() if v is not None})


def handle(args, ctx):
    if args.which == "eighteen":
        report = verify_eighteen_contradiction(_grid(args))
        print(report.index_note)
        print(f"cells: {report.cells_scanned}  degenerate: {report.degenerate_skipped}  "
              f"screened: {report.screened}  refined: {report.refined}")
        print(f"candidates: {len(report.candidates)}  violations: {report.violations}")
        summary = {"candidates": len(report.candidates), "violations": report.violations,
                   "degenerate_skipped": report.degenerate_skipped,
                   "screened": report.screened, "refined": report.refined}
    elif args.which == "symmetric":
        report = verify_symmetric_minus_one(args.samples or len(SYMMETRIC_CASES))
        print(report.index_note)
        for instance in report.instances:
            state = "ok" if instance.ok else f"FAILED {instance.error or ''}".rstrip()
            print(f"phi={instance.phi_sign:.6g} fixed point {instance.fixed_point_sel}: {state}")
        summary = {"instances": len(report.instances), "all_ok": report.all_ok}
    else:
        report = verify_relabelings(args.samples or 20, seed=ctx.seed)
        print(report.index_note)
        print(f"samples: {len(report.samples)}  max residual: {report.max_residual:.3e}")
        summary = {"samples": len(report.samples), "max_residual": report.max_residual}

    if args.out:
        ctx.export(report, args.out, "json")
    return 0, summary
