from .requests import FamilyRequest
from .responses import (
    SubmatrixCensus,
    RealBlockReport,
    Fingerprint,
    Verdict,
    VerdictStatus,
    DefectReport,
    EighteenReport,
    SymmetricReport,
    RelabelingReport,
    SearchResult,
    RunRecord
)
from .domain import (
    CMatrix,
    Tolerances,
    Chm,
    MonomialUnitary,
    MonomialPair,
    ZeroSumClass,
    ZeroSumKind,
    ABCoeffs,
    H2Params,
    SzollosiParams,
    HermitianParams,
    SearchConfig,
    GridSpec
)

__all__ = [
    "FamilyRequest",
    "SubmatrixCensus",
    "RealBlockReport",
    "Fingerprint",
    "Verdict",
    "VerdictStatus",
    "DefectReport",
    "EighteenReport",
    "SymmetricReport",
    "RelabelingReport",
    "SearchResult",
    "RunRecord",
    "CMatrix",
    "Tolerances",
    "Chm",
    "MonomialUnitary",
    "MonomialPair",
    "ZeroSumClass",
    "ZeroSumKind",
    "ABCoeffs",
    "H2Params",
    "SzollosiParams",
    "HermitianParams",
    "SearchConfig",
    "GridSpec"
]
