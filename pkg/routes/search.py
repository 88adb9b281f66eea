"""
MUBTRIO search - alternating-projection search for an MUB trio
"""
from pathlib import Path

from models import SearchConfig
from services.search import seek_trio, trace_frame


def register(subparsers) -> None:
    parser = subparsers.add_parser("search", help="search for an MUB trio")
    parser.add_argument("--dim", type=int, default=6)
    parser.add_argument("--bases", type=int, default=3, help="bases besides the identity")
    parser.add_argument("--restarts", type=int, default=None)
    parser.add_argument("--max-iters", type=int, default=None)
    parser.add_argument("--target", type=float, default=None, help="target defect")
    parser.add_argument("--workers", type=int, default=None)
    parser.add_argument("--out", type=Path, default=None, help="write the result as JSON")
    parser.add_argument("--trace-out", type=Path, default=None, help="write traces as CSV")
    parser.set_defaults(handler=handle)


def handle(args, ctx):
    options = {
        "restarts": args.restarts,
        "max_iters": args.max_iters,
        "target_defect": args.target,
        "workers": args.workers,
    }
    config = SearchConfig(dim=args.dim, bases=args.bases, master_seed=ctx.seed,
                          **{k: v for k, v in options.items() if v is not None})
    result = seek_trio(config)
    print(f"d={result.dim} best defect {result.best_defect:.3e} (restart {result.best_restart})")
    if result.note:
        print(result.note)
    if args.out:
        ctx.export(result, args.out, "json")
    if args.trace_out:
        ctx.export(trace_frame(result), args.trace_out, "csv")
    return 0, {"dim": result.dim, "best_defect": result.best_defect,
               "best_restart": result.best_restart}
