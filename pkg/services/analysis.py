"""
MUBTRIO Analysis - structural invariants of complex Hadamard matrices

1. census: every 2x2 Hadamard submatrix
2. real_block_search: blocks that are real up to complex equivalence
3. shared_corner_pairs: census positions meeting in a single cell
4. fingerprint: quantized cross-ratio phases, a complex-equivalence invariant
"""
import itertools
import logging
import math
from typing import List, Optional, Tuple

import numpy as np

from config import settings
from models.domain import Tolerances
from models.errors import DomainViolation
from models.responses import Fingerprint, Position, RealBlockReport, SubmatrixCensus
from services.core import MatrixLike, as_array, dephase, validate_chm

logger = logging.getLogger(__name__)


def _tol(tol: Optional[Tolerances]) -> Tolerances:
    return tol if tol is not None else Tolerances.from_settings()


def _pairs(d: int) -> np.ndarray:
    return np.array(list(itertools.combinations(range(d), 2)), dtype=int)


def census(H: MatrixLike, tol: Optional[Tolerances] = None) -> SubmatrixCensus:
    """
    Enumerate the 2x2 Hadamard submatrices of H.

    For unimodular [[a, b], [c, d]], row orthogonality a c* + b d* = 0 is
    the same as a d + b c = 0 (multiply through by c d), so a submatrix is
    counted when |a d + b c| < 2 eps_orth.
    """
    tol = _tol(tol)
    M = as_array(H)
    d = M.shape[0]
    pairs = _pairs(d)
    i, j = pairs[:, 0][:, None], pairs[:, 1][:, None]
    k, l = pairs[:, 0][None, :], pairs[:, 1][None, :]
    # rows index row pairs, columns index column pairs
    value = np.abs(M[i, k] * M[j, l] + M[i, l] * M[j, k])

    def positions(mask) -> List[Position]:
        return [
            ((int(pairs[r, 0]), int(pairs[r, 1])), (int(pairs[c, 0]), int(pairs[c, 1])))
            for r, c in zip(*np.nonzero(mask))
        ]

    found = positions(value < 2 * tol.eps_orth)
    borderline = positions((value >= tol.eps_orth) & (value <= 4 * tol.eps_orth))
    if borderline:
        logger.warning("%d census values are borderline", len(borderline))
    return SubmatrixCensus(count=len(found), positions=found, dim=d, borderline=borderline)


def is_h2_reducible(H: MatrixLike, tol: Optional[Tolerances] = None) -> bool:
    """True when H contains at least one 2x2 Hadamard submatrix."""
    return census(H, tol).count >= 1


def _real_up_to_phases(block: np.ndarray, eps: float) -> bool:
    # normalized against the block's first row and column, every entry is a
    # cross ratio; the block is real up to phases iff all of them are +-1
    ratios = block * block[0, 0] / np.outer(block[:, 0], block[0, :])
    distance = np.minimum(np.abs(ratios - 1.0), np.abs(ratios + 1.0))
    return bool(distance.max() < eps)


def real_block_search(H: MatrixLike, r: int, c: int,
                      tol: Optional[Tolerances] = None) -> RealBlockReport:
    """All r x c blocks of H that row and column phase scalings make real."""
    tol = _tol(tol)
    M = as_array(H)
    d = M.shape[0]
    if not (2 <= r <= d and 2 <= c <= d):
        raise DomainViolation(f"block shape ({r}, {c}) must lie between 2 and {d}")

    blocks = []
    for rows in itertools.combinations(range(d), r):
        sub = M[list(rows), :]
        for cols in itertools.combinations(range(d), c):
            if _real_up_to_phases(sub[:, list(cols)], tol.eps_match):
                blocks.append((rows, cols))
    return RealBlockReport(shape=(r, c), blocks=blocks)


def shared_corner_pairs(cen: SubmatrixCensus) -> List[Tuple[Position, Position]]:
    """
    Census positions that share exactly one row and exactly one column.

    Two Hadamard 2x2 blocks meeting in one cell dephase, around that
    cell, to [[1, 1, 1], [1, -1, *], [1, *, -1]].
    """
    out = []
    for a, b in itertools.combinations(cen.positions, 2):
        shared_rows = set(a[0]) & set(b[0])
        shared_cols = set(a[1]) & set(b[1])
        if len(shared_rows) == 1 and len(shared_cols) == 1:
            out.append((a, b))
    return out


def cross_ratios(H: MatrixLike) -> np.ndarray:
    """h_ik h_jl / (h_il h_jk) over i < j and k < l, shape (C(d,2), C(d,2))."""
    M = as_array(H)
    pairs = _pairs(M.shape[0])
    i, j = pairs[:, 0][:, None], pairs[:, 1][:, None]
    k, l = pairs[:, 0][None, :], pairs[:, 1][None, :]
    return M[i, k] * M[j, l] / (M[i, l] * M[j, k])


def fingerprint(H: MatrixLike, quantum: Optional[float] = None) -> Fingerprint:
    """Sorted quantized cross-ratio phases together with their conjugates."""
    q = quantum or settings.fingerprint_quantum
    turns = int(round(2 * math.pi / q))
    steps = np.rint(np.angle(cross_ratios(H)).ravel() / q).astype(np.int64)
    phases = np.concatenate([steps % turns, (-steps) % turns])
    return Fingerprint(quantum=q, phases=tuple(int(p) for p in np.sort(phases)))


def dephased_minus_ones(H: MatrixLike, tol: Optional[Tolerances] = None) -> List[Tuple[int, int]]:
    """Positions of -1 entries in the dephased form of H."""
    tol = _tol(tol)
    D, _ = dephase(validate_chm(H, tol), tol)
    return [(int(i), int(j)) for i, j in np.argwhere(np.abs(D.matrix + 1.0) <= tol.eps_match)]
