"""
MUBTRIO Family Arguments - family parameters shared by gen, exclude and scan
"""
from typing import Any, Dict

from app.context import angle

# (flag, type, help); None values are left out of the parameter dict
FAMILY_OPTIONS = [
    ("--d", int, "fourier: dimension"),
    ("--theta", angle, "h2 / hermitian: theta"),
    ("--phi", angle, "h2: phi"),
    ("--z1-arg", angle, "h2: phase of z1"),
    ("--s2", int, "h2: branch sign of z2"),
    ("--s3", int, "h2: branch sign of z3"),
    ("--s4", int, "h2: branch sign of z4"),
    ("--alpha-re", float, "szollosi: real part of alpha"),
    ("--alpha-im", float, "szollosi: imaginary part of alpha"),
    ("--root-sel-x", int, "szollosi: root index of x"),
    ("--root-sel-y", int, "szollosi: root index of y"),
    ("--root-sel-u", int, "szollosi: root index of u"),
    ("--root-sel-v", int, "szollosi: root index of v"),
    ("--sqrt-branch", int, "hermitian: square-root branch (+1 or -1)"),
    ("--phi-sign", angle, "symmetric_h2: 0 or pi"),
    ("--fixed-point-sel", int, "symmetric_h2: fixed point 0 or 1"),
]


def add_family_arguments(parser) -> None:
    group = parser.add_argument_group("family parameters")
    for flag, kind, text in FAMILY_OPTIONS:
        group.add_argument(flag, type=kind, default=None, help=text)


def family_params(args) -> Dict[str, Any]:
    """Parameters given on the command line, keyed as the family registry expects."""
    params = {}
    for flag, _, _ in FAMILY_OPTIONS:
        key = flag.lstrip("-").replace("-", "_")
        value = getattr(args, key, None)
        if value is not None:
            params[key] = value
    return params
