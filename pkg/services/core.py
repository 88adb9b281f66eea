"""
MUBTRIO Core - complex matrix checks, equivalence moves and dephasing

Every function here is pure: inputs are never modified and returned
matrices are fresh arrays (or frozen inside a Chm).
"""
import logging
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from models.domain import (
    CMatrix, Chm, MonomialPair, MonomialUnitary, OMEGA, Tolerances,
    ZeroSumClass, ZeroSumKind
)
from models.errors import (
    ChmError, DimensionMismatch, NotOrthogonal, NotSquare, NotUnimodular,
    NotZeroSum, SymmetryFailure
)

logger = logging.getLogger(__name__)

MatrixLike = Union[Chm, np.ndarray, Sequence[Sequence[complex]]]


def as_array(M: MatrixLike) -> CMatrix:
    """Plain complex128 array view of a matrix or Chm."""
    if isinstance(M, Chm):
        return M.matrix
    return np.asarray(M, dtype=np.complex128)


def _tol(tol: Optional[Tolerances]) -> Tolerances:
    return tol if tol is not None else Tolerances.from_settings()


def validate_chm(M: MatrixLike, tol: Optional[Tolerances] = None) -> Chm:
    """
    Certify M as a complex Hadamard matrix.

    Unimodularity is checked first, then ||M M^dagger - d I||_max. The
    returned Chm records both observed deviations.
    """
    tol = _tol(tol)
    M = as_array(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] < 1:
        raise NotSquare(M.shape)
    d = M.shape[0]

    finite = np.isfinite(M)
    if not finite.all():
        i, j = np.argwhere(~finite)[0]
        raise NotUnimodular((int(i), int(j)), float("inf"))

    unimodular = np.abs(np.abs(M) - 1.0)
    i, j = np.unravel_index(int(unimodular.argmax()), unimodular.shape)
    if unimodular[i, j] > tol.eps_entry:
        raise NotUnimodular((int(i), int(j)), float(unimodular[i, j]))

    gram = np.abs(M @ M.conj().T - d * np.eye(d))
    r, s = np.unravel_index(int(gram.argmax()), gram.shape)
    if gram[r, s] > tol.eps_orth:
        raise NotOrthogonal((int(min(r, s)), int(max(r, s))), float(gram[r, s]))

    return Chm(
        matrix=M,
        dim=d,
        unimodular_deviation=float(unimodular[i, j]),
        orthogonality_deviation=float(gram[r, s]),
    )


def apply_monomial(M: MatrixLike, P: MonomialUnitary, Q: MonomialUnitary) -> CMatrix:
    """
    Return P·M·Q.

    Rows are permuted and scaled first, then columns; no dense product is
    formed.
    """
    M = as_array(M)
    if M.ndim != 2:
        raise NotSquare(M.shape)
    rows, cols = M.shape
    if P.dim != rows:
        raise DimensionMismatch(rows, P.dim, "left factor")
    if Q.dim != cols:
        raise DimensionMismatch(cols, Q.dim, "right factor")

    out = P.phases[:, None] * M[list(P.perm), :]
    inverse = np.argsort(Q.perm)
    return out[:, inverse] * Q.phases[inverse][None, :]


def dephase(H: Chm, tol: Optional[Tolerances] = None) -> Tuple[Chm, MonomialPair]:
    """
    Normalize H so its first row and column are all ones.

    Entry (i, j) becomes h_ij·h_00 / (h_0j·h_i0), anchored at (0, 0). The
    pair (left, right) reproduces the result through apply_monomial.
    """
    M = as_array(H)
    d = M.shape[0]
    angles = np.angle(M)
    left = MonomialUnitary.diagonal(np.exp(-1j * angles[:, 0]))
    right = MonomialUnitary.diagonal(np.exp(1j * (angles[0, 0] - angles[0, :])))
    out = apply_monomial(M, left, right)
    # exact ones on the border, no rounding residue
    out[0, :] = 1.0
    out[:, 0] = 1.0
    logger.debug("dephased %dx%d matrix", d, d)
    return validate_chm(out, tol), MonomialPair(left=left, right=right)


def count_unit_entries(H: MatrixLike, eps: float) -> int:
    """Number of entries within eps of 1."""
    return int(np.count_nonzero(np.abs(as_array(H) - 1.0) <= eps))


def symmetric_dephase(H: Chm, tol: Optional[Tolerances] = None) -> Tuple[Chm, MonomialUnitary]:
    """
    Dephase a symmetric CHM by a congruence D·H·D, keeping it symmetric.

    With first row (h_0, ..., h_{d-1}), D = diag(h_0^{-1/2}, h_0^{1/2}/h_j).
    """
    tol = _tol(tol)
    M = as_array(H)
    asym = float(np.abs(M - M.T).max())
    if asym > tol.eps_orth:
        raise SymmetryFailure(asym)
    angles = np.angle(M[0, :])
    phases = np.exp(1j * (angles[0] / 2 - angles))
    phases[0] = np.exp(-0.5j * angles[0])
    D = MonomialUnitary.diagonal(phases)
    out = apply_monomial(M, D, D)
    out[0, :] = 1.0
    out[:, 0] = 1.0
    return validate_chm(out, tol), D


def zero_sum_class(values: Sequence[complex], tol: Optional[Tolerances] = None) -> ZeroSumClass:
    """
    Classify three or four unimodular numbers with zero sum.

    Three values are proportional to (1, w, w^2) or (1, w^2, w) with
    w = exp(2 pi i / 3); four values split into two pairs of opposites.
    """
    tol = _tol(tol)
    v = np.asarray(values, dtype=np.complex128).ravel()
    if v.size not in (3, 4):
        raise ChmError(f"expected 3 or 4 values, got {v.size}")

    deviation = np.abs(np.abs(v) - 1.0)
    if deviation.max() > tol.eps_entry:
        k = int(deviation.argmax())
        raise NotUnimodular((k,), float(deviation[k]))
    residual = abs(v.sum())
    if residual > tol.eps_match:
        raise NotZeroSum(residual)

    if v.size == 3:
        scale = v[0]
        ratios = v[1:] / scale
        prop_omega = np.abs(ratios - [OMEGA, OMEGA ** 2]).max()
        prop_omega_sq = np.abs(ratios - [OMEGA ** 2, OMEGA]).max()
        kind = (
            ZeroSumKind.TRIPLE_PROP_OMEGA if prop_omega <= prop_omega_sq
            else ZeroSumKind.TRIPLE_PROP_OMEGA_SQ
        )
        result = ZeroSumClass(kind=kind, scale=complex(scale))
    else:
        partner = 1 + int(np.argmin(np.abs(v[0] + v[1:])))
        rest = [k for k in range(1, 4) if k != partner]
        pairing = ((0, partner), (rest[0], rest[1]))
        result = ZeroSumClass(
            kind=ZeroSumKind.QUAD_PAIRING,
            scale=complex(v[0]),
            pairing=pairing,
            pair_values=(complex(v[0]), complex(v[rest[0]])),
        )

    # the classes are exact for exact zero sums; allow the sum slack
    if np.abs(result.reconstruct() - v).max() > 4 * tol.eps_match:
        raise NotZeroSum(residual)
    return result
