"""
MUBTRIO gen - build a family member and write it to a matrix file
"""
from pathlib import Path

from models import FamilyRequest
from routes.family_args import add_family_arguments, family_params
from services.families import FAMILIES, build_family


def register(subparsers) -> None:
    parser = subparsers.add_parser("gen", help="generate a matrix from a family")
    parser.add_argument("family", choices=sorted(FAMILIES))
    parser.add_argument("--out", type=Path, required=True)
    parser.add_argument("--format", choices=["json", "text"], default="json")
    add_family_arguments(parser)
    parser.set_defaults(handler=handle)


def handle(args, ctx):
    request = FamilyRequest(family=args.family, params=family_params(args))
    H = build_family(request.family, request.params)
    provenance = request.model_dump(mode="json") if args.format == "json" else None
    ctx.write_matrix(H, args.out, args.format, provenance)
    print(f"wrote {args.family} (d={H.dim}) to {args.out}")
    return 0, {
        "family": args.family,
        "dim": H.dim,
        "unimodular_deviation": H.unimodular_deviation,
        "orthogonality_deviation": H.orthogonality_deviation,
    }
