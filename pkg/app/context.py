"""
MUBTRIO Run Context - what a subcommand read and wrote, for the run record
"""
import argparse
import math
import sys
from pathlib import Path
from typing import Any, Dict, Optional

from models.domain import CMatrix
from tools.file_export import FileExporter
from tools.matrix_io import file_digest, read_matrix, write_matrix


class UsageError(Exception):
    """Bad command line; maps to exit code 4."""


class CliArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that raises UsageError instead of exiting."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def angle(text: str) -> float:
    """Float, or a multiple of pi written as "pi", "-pi", "2pi", "pi/2"."""
    t = text.strip().lower().replace(" ", "")
    try:
        value = _angle(t)
    except (ValueError, ZeroDivisionError) as e:
        raise argparse.ArgumentTypeError(f"cannot read angle {text!r}: {e}") from e
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"angle {text!r} is not finite")
    return value


def _angle(t: str) -> float:
    if "pi" not in t:
        return float(t)
    head, _, tail = t.partition("pi")
    factor = {"": 1.0, "-": -1.0, "+": 1.0}.get(head.rstrip("*"))
    if factor is None:
        factor = float(head.rstrip("*"))
    value = factor * math.pi
    if tail:
        if not tail.startswith("/"):
            raise ValueError("expected pi/<number>")
        value /= float(tail[1:])
    return value


class RunContext:
    """Collects input and output digests while a subcommand runs."""

    def __init__(self, seed: int = 0):
        self.seed = seed
        self.inputs: Dict[str, str] = {}
        self.outputs: Dict[str, str] = {}
        self.exporter = FileExporter()

    def read_matrix(self, path: Path) -> CMatrix:
        M = read_matrix(path)
        self.inputs[str(path)] = file_digest(path)
        return M

    def write_matrix(self, M, path: Path, fmt: str = "json",
                     provenance: Optional[Dict[str, Any]] = None) -> Path:
        write_matrix(M, path, fmt, provenance)
        self.outputs[str(path)] = file_digest(path)
        return path

    def export(self, payload, path: Path, format: str = None) -> Dict[str, Any]:
        result = self.exporter.export(payload, path, format)
        self.outputs[result["path"]] = result["sha256"]
        return result
