"""
MUBTRIO scan - census and verdict over a family parameter grid
"""
from pathlib import Path

from app.context import UsageError
from services.search import family_scan, parse_grid_spec, random_h2_points


def register(subparsers) -> None:
    parser = subparsers.add_parser("scan", help="scan a family over a parameter grid")
    parser.add_argument("--family", required=True)
    points = parser.add_mutually_exclusive_group(required=True)
    points.add_argument("--grid", help='e.g. "theta=1.2:3.14:50" or "alpha_re=0.1,0.2;alpha_im=0"')
    points.add_argument("--random", type=int, help="h2 only: this many seeded random points")
    parser.add_argument("--out", type=Path, required=True, help="CSV output")
    parser.set_defaults(handler=handle)


def handle(args, ctx):
    if args.random is not None:
        if args.family != "h2":
            raise UsageError("--random is only available for the h2 family")
        grid = random_h2_points(args.random, seed=ctx.seed)
    else:
        try:
            grid = parse_grid_spec(args.grid)
        except ValueError as e:
            raise UsageError(f"bad --grid: {e}") from e
    table = family_scan(args.family, grid)
    if table.empty:
        raise UsageError("the grid has no points")
    ctx.export(table, args.out, "csv")
    counts = table["verdict"].value_counts().to_dict()
    errors = int((table["error"] != "").sum())
    print(f"{len(table)} points, {errors} errors")
    for status, n in sorted(counts.items()):
        print(f"  {status or 'error'}: {n}")
    return 0, {"points": len(table), "errors": errors,
               "verdicts": {str(k): int(v) for k, v in sorted(counts.items())}}
