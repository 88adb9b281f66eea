"""
MUBTRIO dephase - write the dephased form of a matrix file
"""
from pathlib import Path

from config import settings
from services.core import count_unit_entries, dephase, validate_chm


def register(subparsers) -> None:
    parser = subparsers.add_parser("dephase", help="normalize first row and column to ones")
    parser.add_argument("--in", dest="input", type=Path, required=True)
    parser.add_argument("--out", type=Path, required=True)
    parser.add_argument("--format", choices=["json", "text"], default="json")
    parser.set_defaults(handler=handle)


def handle(args, ctx):
    D, _ = dephase(validate_chm(ctx.read_matrix(args.input)))
    ctx.write_matrix(D, args.out, args.format)
    ones = count_unit_entries(D, settings.eps_entry)
    print(f"wrote dephased matrix to {args.out} ({ones} entries equal to 1)")
    return 0, {"dim": D.dim, "unit_entries": ones}
