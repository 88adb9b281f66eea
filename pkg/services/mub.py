"""
MUBTRIO MUB Engine - unbiasedness checks, exclusion verdicts and verifiers

The verdict engine applies three exclusion criteria in order:
1. Census count - a trio member with any 2x2 Hadamard submatrix has exactly nine
2. Pattern - no two Hadamard 2x2 blocks may share a single corner cell
3. Real block - no 2x3 or 3x2 block real up to complex equivalence

NotExcludedByTheseCriteria is not a claim that H belongs to a trio.
"""
import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Sequence, Tuple

import numpy as np

from models.domain import GridSpec, H2Params, Tolerances
from models.errors import (
    ChmError, ConsistencyFailure, DegenerateMobius, DimensionMismatch, NotSquare, NotUnitary
)
from models.responses import (
    DefectReport, EighteenCandidate, EighteenReport, RelabelingReport, RelabelingSample,
    SymmetricInstance, SymmetricReport, Verdict, VerdictStatus
)
from services.analysis import census, dephased_minus_ones, real_block_search, shared_corner_pairs
from services.core import MatrixLike, as_array, dephase, validate_chm
from services.families import build_symmetric_h2, derive_h2, h2_matrix

logger = logging.getLogger(__name__)

SIGN_COMBOS: List[Tuple[int, int, int]] = list(itertools.product((1, -1), repeat=3))


def _tol(tol: Optional[Tolerances]) -> Tolerances:
    return tol if tol is not None else Tolerances.from_settings()


# ===========================================
# UNBIASEDNESS
# ===========================================

def _check_unitary(U: np.ndarray, tol: Tolerances, index: Optional[int] = None) -> None:
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        raise NotSquare(U.shape)
    deviation = float(np.abs(U.conj().T @ U - np.eye(U.shape[0])).max())
    if deviation > tol.eps_orth:
        raise NotUnitary(deviation, index)


def _defect(U: np.ndarray, V: np.ndarray) -> float:
    d = U.shape[0]
    return float(np.abs(np.abs(U.conj().T @ V) ** 2 - 1.0 / d).max())


def unbiasedness_defect(U: MatrixLike, V: MatrixLike, tol: Optional[Tolerances] = None) -> float:
    """max over (j, k) of | |(U^dagger V)_jk|^2 - 1/d |."""
    tol = _tol(tol)
    U, V = as_array(U), as_array(V)
    if U.shape != V.shape:
        raise DimensionMismatch(U.shape[0], V.shape[0], "basis dimension")
    _check_unitary(U, tol)
    _check_unitary(V, tol)
    return _defect(U, V)


def is_mub_set(bases: Sequence[MatrixLike],
               tol: Optional[Tolerances] = None) -> Tuple[bool, DefectReport]:
    """
    Check that the identity together with bases is pairwise unbiased.

    Index 0 of the report is the identity; entry (i, j) is the defect of
    the pair, with zeros on the diagonal.
    """
    tol = _tol(tol)
    arrays = [as_array(b) for b in bases]
    d = arrays[0].shape[0] if arrays else 1
    for n, U in enumerate(arrays, start=1):
        if U.shape != (d, d):
            raise DimensionMismatch(d, U.shape[0], f"basis {n} dimension")
        _check_unitary(U, tol, n)

    everything = [np.eye(d, dtype=np.complex128)] + arrays
    size = len(everything)
    pairwise = [[0.0] * size for _ in range(size)]
    for i, j in itertools.combinations(range(size), 2):
        pairwise[i][j] = pairwise[j][i] = _defect(everything[i], everything[j])
    max_defect = max((v for row in pairwise for v in row), default=0.0)
    report = DefectReport(pairwise=pairwise, max_defect=max_defect, dim=d)
    return max_defect < tol.eps_match, report


# ===========================================
# EXCLUSION VERDICT
# ===========================================

def exclusion_verdict(H: MatrixLike, tol: Optional[Tolerances] = None) -> Verdict:
    """Apply the census, pattern and real-block criteria to dephased H."""
    tol = _tol(tol)
    D, _ = dephase(validate_chm(H, tol), tol)
    cen = census(D, tol)
    evidence = {
        "census_count": cen.count,
        "admissible_count": cen.count in (9, 18),
    }

    if cen.count >= 1 and cen.count != 9:
        return Verdict(status=VerdictStatus.EXCLUDED_NINE_COUNT, evidence=evidence,
                       citations=["Thm1"])

    pattern = shared_corner_pairs(cen)
    if pattern:
        evidence["pattern_pair"] = [list(map(list, p)) for p in pattern[0]]
        return Verdict(status=VerdictStatus.EXCLUDED_PATTERN, evidence=evidence,
                       citations=["Thm1"])

    for r, c in ((2, 3), (3, 2)):
        report = real_block_search(D, r, c, tol)
        if report.found:
            rows, cols = report.blocks[0]
            evidence["real_block"] = {"rows": list(rows), "cols": list(cols)}
            evidence["real_block_count"] = len(report.blocks)
            return Verdict(status=VerdictStatus.EXCLUDED_REAL_BLOCK, evidence=evidence,
                           citations=["Lem3"])

    return Verdict(status=VerdictStatus.NOT_EXCLUDED, evidence=evidence, citations=[])


# ===========================================
# EIGHTEEN-CASE VERIFIER
# ===========================================
# Equations, 0-indexed: m(2,2) = -1, m(2,4) = -z3, m(4,2) = -z1,
# m(4,4) = z2 z4; their solutions should force m(5,5) = -1.

def _block_corners(m11, m12, m21, m22, z_left, z_right):
    """Entries (0,0) and (1,1) of [[1, zL], [1, -zL]] M [[1, 1], [zR, -zR]] / 2."""
    top = (m11 + z_left * m21) + (m12 + z_left * m22) * z_right
    bottom = (m11 - z_left * m21) - (m12 - z_left * m22) * z_right
    return top / 2, bottom / 2


@np.errstate(divide="ignore", invalid="ignore", over="ignore")
def _screen(grid: GridSpec, tol: Tolerances):
    """Summed equation residuals over the whole grid, shape (R, R, R, 8)."""
    thetas, phis, args = grid.axes()
    T, P = np.meshgrid(thetas, phis, indexing="ij")
    c1 = (np.cos(T) + np.exp(-1j * P) * np.sin(T))[:, :, None]
    c2 = (-np.cos(T) + np.exp(1j * P) * np.sin(T))[:, :, None]
    s = 1j * math.sqrt(3) / 2
    a11, a12 = -0.5 + s * c1, -0.5 + s * c2
    b11, b12 = -0.5 - s * c1, -0.5 - s * c2

    z1 = np.exp(1j * args)[None, None, :]
    w1 = z1 ** 2
    pa, qa, pb, qb = a12 ** 2, a11 ** 2, b12 ** 2, b11 ** 2
    den_a = np.conj(qa) * w1 - np.conj(pa)
    den_b = np.conj(qb) * w1 - np.conj(pb)
    w3 = (pa * w1 - qa) / den_a
    w4 = (pb * w1 - qb) / den_b
    den_inv = pb - np.conj(qb) * w3
    w2 = (qb - np.conj(pb) * w3) / den_inv
    degenerate = ((np.abs(den_a) <= tol.eps_match) | (np.abs(den_b) <= tol.eps_match)
                  | (np.abs(den_inv) <= tol.eps_match) | ~np.isfinite(w2))

    r2, r3, r4 = np.sqrt(w2), np.sqrt(w3), np.sqrt(w4)
    z1 = np.broadcast_to(z1, w2.shape)
    out = np.empty(w2.shape + (len(SIGN_COMBOS),))
    for n, (s2, s3, s4) in enumerate(SIGN_COMBOS):
        z2, z3, z4 = s2 * r2, s3 * r3, s4 * r4
        m22, _ = _block_corners(a11, a12, np.conj(a12), -np.conj(a11), z3, z1)
        m24, _ = _block_corners(b11, b12, np.conj(b12), -np.conj(b11), z3, z2)
        m42, _ = _block_corners(b11, b12, np.conj(b12), -np.conj(b11), z4, z1)
        m44, _ = _block_corners(a11, a12, np.conj(a12), -np.conj(a11), z4, z2)
        out[..., n] = (np.abs(m22 + 1) + np.abs(m24 + z3)
                       + np.abs(m42 + z1) + np.abs(m44 - z2 * z4))
    out[degenerate] = np.inf
    return out, degenerate


def _equation_residuals(x: np.ndarray, signs: Tuple[int, int, int],
                        tol: Tolerances) -> Optional[Tuple[np.ndarray, np.ndarray]]:
    """(four residuals, matrix) at x = (theta, phi, arg z1), None where undefined."""
    s2, s3, s4 = signs
    try:
        params = H2Params.from_arg(x[0], x[1], x[2], s2=s2, s3=s3, s4=s4)
        z = derive_h2(params, tol)
    except (DegenerateMobius, ConsistencyFailure):
        return None
    M = h2_matrix(params.theta, params.phi, z.z1, z.z2, z.z3, z.z4, coeffs=z.coeffs)
    residuals = np.array([
        abs(M[2, 2] + 1), abs(M[2, 4] + z.z3), abs(M[4, 2] + z.z1), abs(M[4, 4] - z.z2 * z.z4),
    ])
    return residuals, M


def _polish(start: np.ndarray, steps: np.ndarray, signs: Tuple[int, int, int],
            iterations: int, tol: Tolerances):
    """Coordinate descent on the summed squared equation residuals."""
    def objective(x):
        evaluated = _equation_residuals(x, signs, tol)
        return math.inf if evaluated is None else float(np.sum(evaluated[0] ** 2))

    x, f = start.copy(), objective(start)
    steps = steps.copy()
    for _ in range(iterations):
        if f < 1e-28 or steps.max() < 1e-15:
            break
        moved = False
        for k, direction in itertools.product(range(3), (1.0, -1.0)):
            y = x.copy()
            y[k] += direction * steps[k]
            fy = objective(y)
            if fy < f:
                x, f, moved = y, fy, True
                break
        if not moved:
            steps /= 2
    return x


def verify_eighteen_contradiction(grid: Optional[GridSpec] = None,
                                  tol: Optional[Tolerances] = None) -> EighteenReport:
    """
    Scan H2-reducible matrices for solutions of the four equations and
    report |m(5,5) + 1| at each refined solution.

    The grid is screened in one vectorized pass and every cell below
    grid.screen is refined, in grid-index order. grid.max_polish, when set,
    keeps only the lowest-residual cells. Degenerate Moebius cells are
    skipped and counted.
    """
    grid = grid or GridSpec()
    tol = _tol(tol)
    thetas, phis, args = grid.axes()
    residuals, degenerate = _screen(grid, tol)
    cells = int(degenerate.size)
    skipped = int(degenerate.sum())
    logger.info("eighteen scan: %d cells x %d branches, %d degenerate",
                cells, len(SIGN_COMBOS), skipped)

    flat = residuals.ravel()
    near = np.flatnonzero(flat < grid.screen)
    screened = int(near.size)
    near = near[np.lexsort((near, flat[near]))][:grid.max_polish]
    seeds = sorted(np.unravel_index(int(n), residuals.shape) for n in near)

    steps = np.array([
        (grid.theta_range[1] - grid.theta_range[0]) / grid.resolution / 2,
        (grid.phi_range[1] - grid.phi_range[0]) / grid.resolution / 2,
        (grid.z1_arg_range[1] - grid.z1_arg_range[0]) / grid.resolution / 2,
    ])

    def refine(index):
        ti, pi, zi, si = (int(v) for v in index)
        start = np.array([thetas[ti], phis[pi], args[zi]])
        signs = SIGN_COMBOS[si]
        x = _polish(start, steps, signs, grid.polish_iters, tol)
        evaluated = _equation_residuals(x, signs, tol)
        if evaluated is None:
            return None
        eq, M = evaluated
        if eq.max() >= tol.eps_match:
            return None
        try:
            count = census(validate_chm(M, tol), tol).count
        except ChmError:
            count = None
        return EighteenCandidate(
            theta=float(x[0]), phi=float(x[1]), z1_arg=float(x[2]), signs=signs,
            grid_index=(ti, pi, zi, si),
            equation_residuals=tuple(float(v) for v in eq),
            m66_residual=float(abs(M[5, 5] + 1)),
            census_count=count,
        )

    with ThreadPoolExecutor(max_workers=grid.workers or 1) as pool:
        refined = list(pool.map(refine, seeds))
    candidates = [c for c in refined if c is not None]
    violations = sum(1 for c in candidates if c.m66_residual >= tol.eps_match)
    logger.info("eighteen scan: %d screened, %d refined, %d candidates, %d violations",
                screened, len(seeds), len(candidates), violations)
    if violations:
        logger.warning("%d candidates have m(5,5) away from -1", violations)

    return EighteenReport(
        grid_spec=grid.model_dump(mode="json"),
        cells_scanned=cells,
        degenerate_skipped=skipped,
        screened=screened,
        refined=len(seeds),
        candidates=candidates,
        residuals=[c.m66_residual for c in candidates],
        violations=violations,
    )


# ===========================================
# SYMMETRIC AND RELABELING VERIFIERS
# ===========================================

SYMMETRIC_CASES = [(0.0, 0), (0.0, 1), (math.pi, 0), (math.pi, 1)]


def verify_symmetric_minus_one(samples: int = len(SYMMETRIC_CASES),
                               tol: Optional[Tolerances] = None) -> SymmetricReport:
    """
    Build the symmetric H2-reducible instances and check entries (3,4) and
    (4,3) are -1, symmetry holds and the verdict excludes them.

    Instances are the (phi, fixed point) cases, first `samples` of them.
    Constructor errors are recorded on the instance.
    """
    if samples < 1:
        raise ValueError("samples must be at least 1")
    tol = _tol(tol)
    instances = []
    for phi_sign, sel in SYMMETRIC_CASES[:samples]:
        try:
            H = build_symmetric_h2(phi_sign, sel, tol)
        except ChmError as e:
            logger.warning("symmetric instance phi=%g sel=%d failed: %s", phi_sign, sel, e)
            instances.append(SymmetricInstance(phi_sign=phi_sign, fixed_point_sel=sel,
                                               ok=False, error=str(e)))
            continue
        r34, r43 = abs(H[3, 4] + 1), abs(H[4, 3] + 1)
        asym = float(np.abs(H.matrix - H.matrix.T).max())
        verdict = exclusion_verdict(H, tol).status
        ok = (r34 < tol.eps_match and r43 < tol.eps_match and asym <= tol.eps_orth
              and verdict != VerdictStatus.NOT_EXCLUDED)
        instances.append(SymmetricInstance(
            phi_sign=phi_sign, fixed_point_sel=sel, ok=ok,
            entry_34_residual=float(r34), entry_43_residual=float(r43),
            symmetry_deviation=asym, verdict=verdict,
            minus_ones=dephased_minus_ones(H, tol),
        ))
    return SymmetricReport(samples=samples, instances=instances)


BLOCK_SWAP = [0, 1, 4, 5, 2, 3]
ROW_SWAP_23 = [0, 1, 3, 2, 4, 5]


def verify_relabelings(samples: int, seed: int = 0,
                       tol: Optional[Tolerances] = None) -> RelabelingReport:
    """
    Check the block relabelings of the H2-reducible form at seeded random
    points:

        rows 2 <-> 3                      -> H(theta, phi, z1, z2, -z3, z4)
        block rows and columns 1 <-> 2    -> H(theta, phi, z2, z1, z4, z3)
        block rows 1 <-> 2 only           -> H(theta + pi, phi, z1, z2, z4, z3)
    """
    tol = _tol(tol)
    rng = np.random.default_rng(seed)
    out: List[RelabelingSample] = []
    while len(out) < samples:
        theta, phi, arg = rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi), rng.uniform(0, 2 * math.pi)
        s2, s3, s4 = (int(v) for v in rng.choice([1, -1], size=3))
        try:
            z = derive_h2(H2Params.from_arg(theta, phi, arg, s2=s2, s3=s3, s4=s4), tol)
        except ChmError:
            continue
        H = h2_matrix(theta, phi, z.z1, z.z2, z.z3, z.z4)
        row_swap = h2_matrix(theta, phi, z.z1, z.z2, -z.z3, z.z4)
        block_swap = h2_matrix(theta, phi, z.z2, z.z1, z.z4, z.z3)
        block_rows = h2_matrix(theta + math.pi, phi, z.z1, z.z2, z.z4, z.z3)
        residuals = (
            float(np.abs(H[ROW_SWAP_23] - row_swap).max()),
            float(np.abs(H[BLOCK_SWAP][:, BLOCK_SWAP] - block_swap).max()),
            float(np.abs(H[BLOCK_SWAP] - block_rows).max()),
        )
        counts = tuple(census(M, tol).count for M in (H, row_swap, block_swap, block_rows))
        out.append(RelabelingSample(
            theta=theta, phi=phi,
            row_swap_residual=residuals[0],
            block_swap_residual=residuals[1],
            block_row_swap_residual=residuals[2],
            census_counts=counts,
        ))
    max_residual = max((max(s.row_swap_residual, s.block_swap_residual,
                            s.block_row_swap_residual) for s in out), default=0.0)
    return RelabelingReport(samples=out, max_residual=max_residual)
