"""
MUBTRIO Report Models
"""
from datetime import datetime, timezone
from enum import Enum
from math import comb
from typing import Any, Dict, List, Optional, Tuple
import uuid

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_serializer, model_validator

SCHEMA_VERSION = 1

INDEX_NOTE = (
    "Entries are 0-indexed; the 1-indexed entry m_ij of the proofs is entry (i-1, j-1) here."
)

Pair = Tuple[int, int]
Position = Tuple[Pair, Pair]


class SubmatrixCensus(BaseModel):
    """Every 2x2 Hadamard submatrix of a CHM, as (row pair, column pair)."""
    count: int = Field(ge=0)
    positions: List[Position] = Field(default_factory=list)
    dim: int = Field(ge=2)
    # |a*d + b*c| in [eps_orth, 4*eps_orth]: too close to call either way
    borderline: List[Position] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_positions(self):
        if self.count != len(self.positions):
            raise ValueError("count must equal the number of positions")
        if list(self.positions) != sorted(set(self.positions)):
            raise ValueError("positions must be sorted and duplicate-free")
        if self.count > comb(self.dim, 2) ** 2:
            raise ValueError("count exceeds the number of 2x2 submatrices")
        return self

    def has(self, rows: Pair, cols: Pair) -> bool:
        return (tuple(rows), tuple(cols)) in set(self.positions)


class RealBlockReport(BaseModel):
    """Blocks that become entrywise real under row and column phase scalings."""
    shape: Tuple[int, int]
    blocks: List[Tuple[Tuple[int, ...], Tuple[int, ...]]] = Field(default_factory=list)

    @property
    def found(self) -> bool:
        return bool(self.blocks)


class Fingerprint(BaseModel):
    """Sorted multiset of quantized cross-ratio phases (with conjugates)."""
    model_config = ConfigDict(frozen=True)

    quantum: float
    phases: Tuple[int, ...]


class VerdictStatus(str, Enum):
    EXCLUDED_NINE_COUNT = "ExcludedNineCount"
    EXCLUDED_REAL_BLOCK = "ExcludedRealBlock"
    EXCLUDED_PATTERN = "ExcludedPattern"
    NOT_EXCLUDED = "NotExcludedByTheseCriteria"


class Verdict(BaseModel):
    """Exclusion decision; NOT_EXCLUDED is never a claim of trio membership."""
    status: VerdictStatus
    evidence: Dict[str, Any] = Field(default_factory=dict)
    citations: List[str] = Field(default_factory=list)

    @property
    def excluded(self) -> bool:
        return self.status != VerdictStatus.NOT_EXCLUDED


class DefectReport(BaseModel):
    """Pairwise unbiasedness defects; basis 0 is the identity."""
    pairwise: List[List[float]]
    max_defect: float = Field(ge=0.0)
    dim: int

    @model_validator(mode="after")
    def check_max(self):
        values = [v for row in self.pairwise for v in row]
        if any(v < 0 for v in values):
            raise ValueError("defects are non-negative")
        if values and abs(max(values) - self.max_defect) > 1e-15:
            raise ValueError("max_defect must equal the largest pairwise defect")
        return self


class EighteenCandidate(BaseModel):
    theta: float
    phi: float
    z1_arg: float
    signs: Tuple[int, int, int]
    grid_index: Tuple[int, int, int, int]
    equation_residuals: Tuple[float, float, float, float]
    m66_residual: float
    census_count: Optional[int] = None


class EighteenReport(BaseModel):
    schema_version: int = SCHEMA_VERSION
    index_note: str = INDEX_NOTE
    grid_spec: Dict[str, Any]
    cells_scanned: int = 0
    degenerate_skipped: int = 0
    screened: int = 0  # cells below the screen, before any max_polish cap
    refined: int = 0
    candidates: List[EighteenCandidate] = Field(default_factory=list)
    residuals: List[float] = Field(default_factory=list)
    violations: int = 0


class SymmetricInstance(BaseModel):
    phi_sign: float
    fixed_point_sel: int
    ok: bool
    entry_34_residual: Optional[float] = None
    entry_43_residual: Optional[float] = None
    symmetry_deviation: Optional[float] = None
    verdict: Optional[VerdictStatus] = None
    # -1 entries of the dephased form, as (row, col)
    minus_ones: List[Tuple[int, int]] = Field(default_factory=list)
    error: Optional[str] = None


class SymmetricReport(BaseModel):
    schema_version: int = SCHEMA_VERSION
    index_note: str = INDEX_NOTE
    samples: int
    instances: List[SymmetricInstance] = Field(default_factory=list)

    @property
    def all_ok(self) -> bool:
        return all(i.ok for i in self.instances)


class RelabelingSample(BaseModel):
    theta: float
    phi: float
    row_swap_residual: float
    block_swap_residual: float
    block_row_swap_residual: float
    census_counts: Tuple[int, int, int, int]


class RelabelingReport(BaseModel):
    schema_version: int = SCHEMA_VERSION
    index_note: str = INDEX_NOTE
    samples: List[RelabelingSample] = Field(default_factory=list)
    max_residual: float = 0.0


class SearchResult(BaseModel):
    """Best trio found across restarts; d = 6 results are reports, not claims."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    schema_version: int = SCHEMA_VERSION
    dim: int
    best_bases: List[np.ndarray]
    best_defect: float
    best_restart: int
    trace: List[float]
    iterations_used: List[int]
    seeds: List[List[int]]
    histories: List[List[float]] = Field(default_factory=list)
    note: str = ""

    @field_serializer("best_bases")
    def serialize_bases(self, bases: List[np.ndarray]):
        return [[[[float(z.real), float(z.imag)] for z in row] for row in b] for b in bases]


class RunRecord(BaseModel):
    """One line of the append-only run log."""
    id: str = Field(default_factory=lambda: f"run_{uuid.uuid4().hex[:8]}")
    timestamp: datetime = Field(default_factory=lambda: datetime.now(timezone.utc))
    subcommand: str
    params: Dict[str, Any] = Field(default_factory=dict)
    version: str
    inputs: Dict[str, str] = Field(default_factory=dict)   # path -> sha256
    outputs: Dict[str, str] = Field(default_factory=dict)
    exit_code: int
    summary: Dict[str, Any] = Field(default_factory=dict)
