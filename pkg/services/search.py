"""
MUBTRIO Search - alternating projections toward an MUB trio, and family scans

seek_trio runs seeded restarts of averaged alternating projections over the
identity and the searched bases; family_scan builds, censuses and judges a
family over a grid.
"""
import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from scipy.linalg import polar

from models.domain import SearchConfig, Tolerances
from models.errors import UnknownFamily
from models.responses import SearchResult
from services.analysis import census
from services.families import FAMILIES, build_family
from services.mub import exclusion_verdict, is_mub_set

logger = logging.getLogger(__name__)

STAGNATION_TOLERANCE = 1e-12
SIX_NOTE = (
    "Report only: a trio of MUBs unbiased to the identity in dimension 6 is "
    "conjectured not to exist; the best defect found is neither a proof nor a construction."
)
BOUNDED_NOTE = (
    "Report only: at most d bases can be unbiased to the identity and to each other in "
    "dimension d, so this defect cannot reach zero."
)


# ===========================================
# TRIO SEARCH
# ===========================================

def restart_seed(master_seed: int, restart: int) -> np.random.SeedSequence:
    """Seed of restart k; reproducible without running restarts 0..k-1."""
    return np.random.SeedSequence(master_seed, spawn_key=(restart,))


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary from the QR factorization of a complex Gaussian draw."""
    Z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    Q, R = np.linalg.qr(Z)
    diagonal = np.diag(R)
    return Q * (diagonal / np.abs(diagonal))


def trio_defect(bases: Sequence[np.ndarray]) -> float:
    """Largest pairwise defect over {I} + bases."""
    d = bases[0].shape[0]
    everything = [np.eye(d)] + list(bases)
    return max(
        float(np.abs(np.abs(U.conj().T @ V) ** 2 - 1.0 / d).max())
        for U, V in itertools.combinations(everything, 2)
    )


def _flatten(G: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Entrywise projection onto modulus 1/sqrt(d), keeping phases."""
    d = G.shape[0]
    modulus = np.abs(G)
    zero = modulus < 1e-300
    phase = np.where(zero, 1.0, G / np.where(zero, 1.0, modulus))
    if zero.any():
        phase[zero] = np.exp(1j * rng.uniform(0.0, 2 * math.pi, int(zero.sum())))
    return phase / math.sqrt(d)


def _projection_round(bases: List[np.ndarray], rng: np.random.Generator) -> List[np.ndarray]:
    """
    One averaged projection round.

    For each pair (i, j) of {I, U_1, ..., U_k}, G = U_i^dagger U_j is flattened to F;
    U_j is pulled toward U_i F and U_i toward U_j F^dagger. Each basis moves
    to the polar factor of the mean of its targets.
    """
    d = bases[0].shape[0]
    everything = [np.eye(d, dtype=np.complex128)] + bases
    targets: Dict[int, List[np.ndarray]] = {k: [] for k in range(1, len(everything))}
    for i, j in itertools.combinations(range(len(everything)), 2):
        Ui, Uj = everything[i], everything[j]
        F = _flatten(Ui.conj().T @ Uj, rng)
        targets[j].append(Ui @ F)
        if i > 0:
            targets[i].append(Uj @ F.conj().T)
    return [polar(np.mean(targets[k], axis=0))[0] for k in range(1, len(everything))]


def _note(config: SearchConfig) -> str:
    if config.bases > config.dim:
        return BOUNDED_NOTE
    if config.dim == 6 and config.bases >= 3:
        return SIX_NOTE
    return ""


def _run_restart(config: SearchConfig, restart: int):
    """Single restart; returns (best defect, best bases, history, iterations)."""
    rng = np.random.default_rng(restart_seed(config.master_seed, restart))
    bases = [random_unitary(config.dim, rng) for _ in range(config.bases)]
    best = trio_defect(bases)
    best_bases = [b.copy() for b in bases]
    history = [best]

    iterations = 0
    for iterations in range(1, config.max_iters + 1):
        bases = _projection_round(bases, rng)
        defect = trio_defect(bases)
        # worse rounds are kept as iterates but rejected as the best
        if defect < best:
            best, best_bases = defect, [b.copy() for b in bases]
        history.append(best)
        if best < config.target_defect:
            break
        window = config.stagnation_window
        if iterations >= window:
            previous = history[-window - 1]
            if previous - best <= STAGNATION_TOLERANCE * previous:
                break

    logger.info("restart %d: defect %.3e after %d iterations", restart, best, iterations)
    return best, best_bases, history, iterations


def seek_trio(config: Optional[SearchConfig] = None,
              tol: Optional[Tolerances] = None) -> SearchResult:
    """
    Minimize the trio defect over seeded restarts and return the best.

    Restarts run concurrently; the merge picks the lowest (defect, restart)
    so the result does not depend on scheduling.
    """
    config = config or SearchConfig()
    logger.info("searching d=%d for %d bases with %d restarts",
                config.dim, config.bases, config.restarts)
    if config.bases > config.dim:
        logger.warning("%d bases unbiased to the identity cannot exist in d=%d; "
                       "the defect will stay bounded away from zero", config.bases, config.dim)

    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        runs = list(pool.map(lambda k: _run_restart(config, k), range(config.restarts)))

    best_restart = min(range(config.restarts), key=lambda k: (runs[k][0], k))
    best_bases = runs[best_restart][1]
    _, report = is_mub_set(best_bases, tol)

    return SearchResult(
        dim=config.dim,
        best_bases=best_bases,
        best_defect=report.max_defect,
        best_restart=best_restart,
        trace=[r[0] for r in runs],
        iterations_used=[r[3] for r in runs],
        seeds=[[config.master_seed, k] for k in range(config.restarts)],
        histories=[r[2] for r in runs],
        note=_note(config),
    )


def trace_frame(result: SearchResult) -> pd.DataFrame:
    """Per-restart best-so-far defect by iteration, long format."""
    rows = [
        {"restart": k, "iteration": n, "defect": value}
        for k, history in enumerate(result.histories)
        for n, value in enumerate(history)
    ]
    return pd.DataFrame(rows, columns=["restart", "iteration", "defect"])


# ===========================================
# FAMILY SCAN
# ===========================================

GridLike = Union[str, Dict[str, Iterable[Any]], Sequence[Dict[str, Any]]]


def parse_grid_spec(spec: str) -> Dict[str, List[Any]]:
    """
    Parse "name=start:stop:num;name=v1,v2;name=value".

    start:stop:num is an inclusive linspace; lists and single values are
    taken as numbers where possible.
    """
    axes: Dict[str, List[Any]] = {}
    for part in filter(None, (p.strip() for p in spec.split(";"))):
        if "=" not in part:
            raise ValueError(f"grid axis {part!r} is not of the form name=values")
        name, values = (s.strip() for s in part.split("=", 1))
        if values.count(":") == 2:
            start, stop, num = values.split(":")
            axes[name] = [float(v) for v in np.linspace(float(start), float(stop), int(num))]
        else:
            axes[name] = [_number(v) for v in values.split(",")]
    return axes


def _number(text: str) -> Any:
    text = text.strip()
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    return text


def grid_points(param_grid: GridLike) -> List[Dict[str, Any]]:
    """Expand a grid into parameter dicts, last axis fastest."""
    if isinstance(param_grid, str):
        param_grid = parse_grid_spec(param_grid)
    if isinstance(param_grid, dict):
        names = list(param_grid)
        return [dict(zip(names, values))
                for values in itertools.product(*(list(param_grid[n]) for n in names))]
    return [dict(p) for p in param_grid]


def family_scan(family: str, param_grid: GridLike,
                tol: Optional[Tolerances] = None) -> pd.DataFrame:
    """
    Build, census and judge a family at every grid point.

    One row per point; constructor failures become rows with an error
    message instead of aborting the scan.
    """
    if family not in FAMILIES:
        raise UnknownFamily(family, tuple(FAMILIES))
    points = grid_points(param_grid)
    logger.info("scanning %s over %d points", family, len(points))

    rows = []
    for params in points:
        row: Dict[str, Any] = dict(params)
        try:
            H = build_family(family, params, tol)
            verdict = exclusion_verdict(H, tol)
            row.update(
                census_count=census(H, tol).count,
                verdict=verdict.status.value,
                unimodular_deviation=H.unimodular_deviation,
                orthogonality_deviation=H.orthogonality_deviation,
                error="",
            )
        except ValueError as e:  # ChmError and pydantic ValidationError
            logger.warning("%s at %s: %s", family, params, e)
            row.update(census_count=None, verdict="", unimodular_deviation=None,
                       orthogonality_deviation=None, error=f"{type(e).__name__}: {e}")
        rows.append(row)
    return pd.DataFrame(rows)


def random_h2_points(n: int, seed: int = 0) -> List[Dict[str, Any]]:
    """n seeded random parameter points for the h2 family."""
    rng = np.random.default_rng(seed)
    return [
        {
            "theta": float(rng.uniform(0, math.pi)),
            "phi": float(rng.uniform(0, 2 * math.pi)),
            "z1_arg": float(rng.uniform(0, 2 * math.pi)),
            "s2": int(rng.choice([1, -1])),
            "s3": int(rng.choice([1, -1])),
            "s4": int(rng.choice([1, -1])),
        }
        for _ in range(n)
    ]
