"""
MUBTRIO exclude - decide whether a matrix is excluded from MUB trios
"""
from pathlib import Path

from app.context import UsageError
from models import VerdictStatus
from routes.family_args import add_family_arguments, family_params
from services.core import validate_chm
from services.families import FAMILIES, build_family
from services.mub import exclusion_verdict


def register(subparsers) -> None:
    parser = subparsers.add_parser("exclude", help="run the exclusion criteria")
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--in", dest="input", type=Path)
    source.add_argument("--family", choices=sorted(FAMILIES))
    add_family_arguments(parser)
    parser.set_defaults(handler=handle)


def describe(verdict) -> str:
    evidence = verdict.evidence
    if verdict.status == VerdictStatus.EXCLUDED_NINE_COUNT:
        return f"EXCLUDED (Thm1): census={evidence['census_count']} ≠ 9"
    if verdict.status == VerdictStatus.EXCLUDED_PATTERN:
        return f"EXCLUDED (Thm1): corner-sharing pair {evidence['pattern_pair']}"
    if verdict.status == VerdictStatus.EXCLUDED_REAL_BLOCK:
        block = evidence["real_block"]
        return f"EXCLUDED (Lem3): real block rows={block['rows']} cols={block['cols']}"
    return "NOT EXCLUDED by implemented criteria"


def handle(args, ctx):
    if args.input is not None:
        params = family_params(args)
        if params:
            raise UsageError("family parameters need --family, not --in")
        H = validate_chm(ctx.read_matrix(args.input))
    else:
        H = build_family(args.family, family_params(args))

    verdict = exclusion_verdict(H)
    print(describe(verdict))
    code = 2 if verdict.status == VerdictStatus.NOT_EXCLUDED else 0
    return code, {"status": verdict.status.value, "evidence": verdict.evidence,
                  "citations": verdict.citations}
