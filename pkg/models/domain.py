"""
MUBTRIO Domain Models
"""
import math
from enum import Enum
from typing import Optional, Tuple

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from config import settings

# Dense complex matrix, dimension carried at run time
CMatrix = npt.NDArray[np.complex128]

TWO_PI = 2 * math.pi
OMEGA = complex(math.cos(TWO_PI / 3), math.sin(TWO_PI / 3))

# Lower edge of the Hermitian family's theta range
HERMITIAN_THETA_MIN = math.acos((math.sqrt(3) - 1) / 2)


def _frozen(array) -> np.ndarray:
    out = np.array(array, dtype=np.complex128, copy=True)
    out.flags.writeable = False
    return out


class Tolerances(BaseModel):
    """Layered tolerance policy: entry <= orthogonality <= match."""
    model_config = ConfigDict(frozen=True)

    eps_entry: float = Field(default=1e-9, gt=0.0, lt=1e-3)
    eps_orth: float = Field(default=1e-8, gt=0.0, lt=1e-3)
    eps_match: float = Field(default=1e-6, gt=0.0, lt=1e-3)

    @model_validator(mode="after")
    def check_layering(self):
        if not (self.eps_entry <= self.eps_orth <= self.eps_match):
            raise ValueError("tolerances must satisfy eps_entry <= eps_orth <= eps_match")
        return self

    @classmethod
    def from_settings(cls) -> "Tolerances":
        return cls(
            eps_entry=settings.eps_entry,
            eps_orth=settings.eps_orth,
            eps_match=settings.eps_match,
        )


class Chm(BaseModel):
    """A matrix certified unimodular and row-orthogonal at validation time."""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    matrix: np.ndarray
    dim: int = Field(ge=1)
    unimodular_deviation: float = Field(ge=0.0)
    orthogonality_deviation: float = Field(ge=0.0)

    @field_validator("matrix", mode="before")
    @classmethod
    def freeze_matrix(cls, v):
        return _frozen(v)

    @model_validator(mode="after")
    def check_shape(self):
        if self.matrix.shape != (self.dim, self.dim):
            raise ValueError(f"matrix shape {self.matrix.shape} does not match dim {self.dim}")
        return self

    def __getitem__(self, index):
        return self.matrix[index]


class MonomialUnitary(BaseModel):
    """
    Permutation composed with a phase diagonal.

    As a dense matrix, entry (i, perm[i]) equals phases[i] and every other
    entry is zero.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    perm: Tuple[int, ...]
    phases: np.ndarray

    @field_validator("phases", mode="before")
    @classmethod
    def freeze_phases(cls, v):
        return _frozen(np.ravel(v))

    @model_validator(mode="after")
    def check_monomial(self):
        d = len(self.perm)
        if sorted(self.perm) != list(range(d)):
            raise ValueError(f"perm is not a bijection of 0..{d - 1}: {self.perm}")
        if self.phases.shape != (d,):
            raise ValueError(f"expected {d} phases, got {self.phases.shape[0]}")
        deviation = np.abs(np.abs(self.phases) - 1.0)
        if deviation.max(initial=0.0) > settings.eps_entry:
            raise ValueError(f"phase {int(deviation.argmax())} is not unimodular")
        return self

    @property
    def dim(self) -> int:
        return len(self.perm)

    @classmethod
    def identity(cls, d: int) -> "MonomialUnitary":
        return cls(perm=tuple(range(d)), phases=np.ones(d))

    @classmethod
    def diagonal(cls, phases) -> "MonomialUnitary":
        phases = np.ravel(phases)
        return cls(perm=tuple(range(len(phases))), phases=phases)

    @classmethod
    def random(cls, d: int, rng: np.random.Generator) -> "MonomialUnitary":
        perm = tuple(int(p) for p in rng.permutation(d))
        return cls(perm=perm, phases=np.exp(1j * rng.uniform(0.0, TWO_PI, d)))

    def to_matrix(self) -> CMatrix:
        out = np.zeros((self.dim, self.dim), dtype=np.complex128)
        out[np.arange(self.dim), list(self.perm)] = self.phases
        return out


class MonomialPair(BaseModel):
    """Left and right factors of a complex-equivalence move P·M·Q."""
    model_config = ConfigDict(frozen=True)

    left: MonomialUnitary
    right: MonomialUnitary


class ZeroSumKind(str, Enum):
    TRIPLE_PROP_OMEGA = "triple_prop_omega"        # scale * (1, w, w^2)
    TRIPLE_PROP_OMEGA_SQ = "triple_prop_omega_sq"  # scale * (1, w^2, w)
    QUAD_PAIRING = "quad_pairing"


class ZeroSumClass(BaseModel):
    """Classification of three or four unimodular numbers summing to zero."""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    kind: ZeroSumKind
    scale: complex
    pairing: Tuple[Tuple[int, int], ...] = ()
    # quads: value of the lower index of each pair, in pairing order
    pair_values: Tuple[complex, ...] = ()

    def reconstruct(self) -> np.ndarray:
        if self.kind == ZeroSumKind.TRIPLE_PROP_OMEGA:
            return self.scale * np.array([1.0, OMEGA, OMEGA ** 2])
        if self.kind == ZeroSumKind.TRIPLE_PROP_OMEGA_SQ:
            return self.scale * np.array([1.0, OMEGA ** 2, OMEGA])
        out = np.zeros(4, dtype=np.complex128)
        for (i, j), value in zip(self.pairing, self.pair_values):
            out[i] = value
            out[j] = -value
        return out


class ABCoeffs(BaseModel):
    """The 2x2 matrices A and B of the H2-reducible block form."""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    theta: float
    phi: float
    a11: complex
    a12: complex
    b11: complex
    b12: complex
    A: np.ndarray
    B: np.ndarray

    @field_validator("A", "B", mode="before")
    @classmethod
    def freeze_blocks(cls, v):
        return _frozen(v)

    @model_validator(mode="after")
    def check_b_consistency(self):
        if abs(self.b11 + 1 + self.a11) > 1e-12 or abs(self.b12 + 1 + self.a12) > 1e-12:
            raise ValueError("B11 = -1 - A11 and B12 = -1 - A12 must hold")
        return self


def _normalize_angle(v: float) -> float:
    v = math.fmod(float(v), TWO_PI)
    return v + TWO_PI if v < 0 else v


class H2Params(BaseModel):
    """
    Free parameters of an H2-reducible matrix.

    z2, z3, z4 are derived from (theta, phi, z1) through the Moebius
    constraints; the sign fields pick their square-root branches.
    """
    model_config = ConfigDict(frozen=True)

    theta: float
    phi: float
    z1: complex
    s2: int = 1
    s3: int = 1
    s4: int = 1

    @field_validator("theta", "phi", mode="before")
    @classmethod
    def normalize_angle(cls, v):
        return _normalize_angle(v)

    @field_validator("z1")
    @classmethod
    def check_unimodular(cls, v):
        if abs(abs(v) - 1.0) > settings.eps_entry:
            raise ValueError(f"z1 must be unimodular, |z1| = {abs(v)!r}")
        return complex(v)

    @field_validator("s2", "s3", "s4")
    @classmethod
    def check_sign(cls, v):
        if v not in (1, -1):
            raise ValueError("branch signs must be +1 or -1")
        return v

    @classmethod
    def from_arg(cls, theta: float, phi: float, z1_arg: float, s2: int = 1, s3: int = 1,
                 s4: int = 1) -> "H2Params":
        return cls(theta=theta, phi=phi, z1=complex(math.cos(z1_arg), math.sin(z1_arg)),
                   s2=s2, s3=s3, s4=s4)


class SzollosiParams(BaseModel):
    """Parameter point of the Szollosi family; selections index sorted cubic roots."""
    model_config = ConfigDict(frozen=True)

    alpha: complex
    root_sel_x: int = Field(default=0, ge=0, le=2)
    root_sel_y: int = Field(default=1, ge=0, le=2)
    root_sel_u: int = Field(default=0, ge=0, le=2)
    root_sel_v: int = Field(default=1, ge=0, le=2)

    @model_validator(mode="after")
    def check_distinct(self):
        if self.root_sel_x == self.root_sel_y:
            raise ValueError("root_sel_x and root_sel_y must differ")
        if self.root_sel_u == self.root_sel_v:
            raise ValueError("root_sel_u and root_sel_v must differ")
        return self


class HermitianParams(BaseModel):
    """Parameter point of the Hermitian family."""
    model_config = ConfigDict(frozen=True)

    theta: float
    sqrt_branch: int = 1

    @field_validator("sqrt_branch")
    @classmethod
    def check_branch(cls, v):
        if v not in (1, -1):
            raise ValueError("sqrt_branch must be +1 or -1")
        return v

    @staticmethod
    def theta_allowed(theta: float, slack: float = 1e-12) -> bool:
        return HERMITIAN_THETA_MIN - slack <= abs(theta) <= math.pi + slack


class SearchConfig(BaseModel):
    """Configuration of the alternating-projection trio search."""
    model_config = ConfigDict(frozen=True)

    dim: int = Field(default=6, ge=2)
    # bases besides the identity; 3 makes a trio. At most d of them can be mutually unbiased
    bases: int = Field(default=3, ge=1)
    restarts: int = Field(default_factory=lambda: settings.search_restarts, ge=1)
    max_iters: int = Field(default_factory=lambda: settings.search_max_iters, ge=1)
    master_seed: int = Field(default=0, ge=0, lt=2 ** 64)
    target_defect: float = Field(default_factory=lambda: settings.search_target_defect, gt=0.0)
    stagnation_window: int = Field(default_factory=lambda: settings.search_stagnation_window, ge=1)
    workers: int = Field(default_factory=lambda: settings.search_workers, ge=1)


class GridSpec(BaseModel):
    """Resolution of the eighteen-case scan over (theta, phi, arg z1) x branch signs."""
    model_config = ConfigDict(frozen=True)

    resolution: int = Field(default_factory=lambda: settings.eighteen_grid, ge=1)
    theta_range: Tuple[float, float] = (0.0, math.pi)
    phi_range: Tuple[float, float] = (0.0, TWO_PI)
    z1_arg_range: Tuple[float, float] = (0.0, TWO_PI)
    polish_iters: int = Field(default_factory=lambda: settings.eighteen_polish_iters, ge=0)
    max_polish: Optional[int] = Field(default_factory=lambda: settings.eighteen_max_polish, ge=0)
    screen: float = Field(default_factory=lambda: settings.eighteen_screen, gt=0.0)
    workers: Optional[int] = None

    def axes(self):
        """Grid axes; periodic ranges exclude their right endpoint."""
        def axis(lo, hi):
            return np.linspace(lo, hi, self.resolution, endpoint=False)
        return axis(*self.theta_range), axis(*self.phi_range), axis(*self.z1_arg_range)
