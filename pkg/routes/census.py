"""
MUBTRIO census - count the 2x2 Hadamard submatrices of a matrix file
"""
from pathlib import Path

from services.analysis import census
from services.core import validate_chm


def register(subparsers) -> None:
    parser = subparsers.add_parser("census", help="2x2 Hadamard submatrix census")
    parser.add_argument("--in", dest="input", type=Path, required=True)
    parser.add_argument("--out", type=Path, default=None, help="write the census report as JSON")
    parser.set_defaults(handler=handle)


def handle(args, ctx):
    H = validate_chm(ctx.read_matrix(args.input))
    report = census(H)
    print(f"count: {report.count}")
    if report.borderline:
        print(f"borderline: {len(report.borderline)}")
    if args.out:
        ctx.export(report, args.out, "json")
    return 0, {"count": report.count, "borderline": len(report.borderline)}
