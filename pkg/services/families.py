"""
MUBTRIO Families - constructors for the explicit CHM families

Families:
1. H2-reducible block form, parametrized by (theta, phi, z1) and branch signs
2. Fourier matrix F_d
3. Bjorck's circulant C_6
4. Szollosi family X(a, b), built from the roots of two cubics
5. Hermitian family H(theta)
6. Symmetric H2-reducible instances (fixed points of M_A)

Every constructor returns a validated Chm or raises a ChmError.
"""
import cmath
import itertools
import logging
import math
from dataclasses import dataclass
from typing import Any, Callable, Dict, Optional, Tuple

import numpy as np

from models.domain import (
    ABCoeffs, CMatrix, Chm, H2Params, HermitianParams, SzollosiParams, Tolerances
)
from models.errors import (
    BranchFailure, ChmError, ConsistencyFailure, DegenerateMobius, DomainViolation,
    NoUnimodularFixedPoint, NotUnimodular, RootSelectionError, SymmetryFailure,
    UnknownFamily, WrongBranch
)
from services.core import validate_chm

logger = logging.getLogger(__name__)

SQRT3_2 = math.sqrt(3) / 2
F2 = np.array([[1, 1], [1, -1]], dtype=np.complex128)


def _tol(tol: Optional[Tolerances]) -> Tolerances:
    return tol if tol is not None else Tolerances.from_settings()


# ===========================================
# H2-REDUCIBLE FORM
# ===========================================

def ab_coefficients(theta: float, phi: float) -> ABCoeffs:
    """Coefficients A11, A12, B11, B12 and the 2x2 blocks A and B."""
    c1 = math.cos(theta) + cmath.exp(-1j * phi) * math.sin(theta)
    c2 = -math.cos(theta) + cmath.exp(1j * phi) * math.sin(theta)
    a11 = -0.5 + 1j * SQRT3_2 * c1
    a12 = -0.5 + 1j * SQRT3_2 * c2
    b11 = -0.5 - 1j * SQRT3_2 * c1
    b12 = -0.5 - 1j * SQRT3_2 * c2
    A = [[a11, a12], [a12.conjugate(), -a11.conjugate()]]
    B = [[b11, b12], [b12.conjugate(), -b11.conjugate()]]
    return ABCoeffs(theta=theta, phi=phi, a11=a11, a12=a12, b11=b11, b12=b12, A=A, B=B)


def _mobius_terms(kind: str, coeffs: ABCoeffs) -> Tuple[complex, complex]:
    """(p, q) such that M(z) = (p z - q) / (conj(q) z - conj(p))."""
    if kind == "A":
        return coeffs.a12 ** 2, coeffs.a11 ** 2
    if kind == "B":
        return coeffs.b12 ** 2, coeffs.b11 ** 2
    raise ValueError(f"Moebius kind must be 'A' or 'B', got {kind!r}")


def _check_circle(z: complex, tol: Tolerances) -> None:
    deviation = abs(abs(z) - 1.0)
    if deviation > tol.eps_entry:
        raise NotUnimodular((0,), deviation)


def mobius_apply(kind: str, coeffs: ABCoeffs, z: complex,
                 tol: Optional[Tolerances] = None) -> complex:
    """Image of a unimodular z under M_A or M_B; the unit circle maps to itself."""
    tol = _tol(tol)
    _check_circle(z, tol)
    p, q = _mobius_terms(kind, coeffs)
    denominator = q.conjugate() * z - p.conjugate()
    if abs(denominator) <= tol.eps_match:
        raise DegenerateMobius(kind, abs(denominator))
    return (p * z - q) / denominator


def mobius_inverse(kind: str, coeffs: ABCoeffs, w: complex,
                   tol: Optional[Tolerances] = None) -> complex:
    """Preimage under M_A or M_B, by inverting the linear-fractional map."""
    tol = _tol(tol)
    _check_circle(w, tol)
    p, q = _mobius_terms(kind, coeffs)
    # [[p, -q], [conj q, -conj p]] inverts to [[-conj p, q], [-conj q, p]]
    denominator = p - q.conjugate() * w
    if abs(denominator) <= tol.eps_match:
        raise DegenerateMobius(kind, abs(denominator))
    return (q - p.conjugate() * w) / denominator


def h2_matrix(theta: float, phi: float, z1: complex, z2: complex, z3: complex,
              z4: complex, coeffs: Optional[ABCoeffs] = None) -> CMatrix:
    """
    Assemble the block matrix

        [ F2  Z1          Z2         ]
        [ Z3  Z3 A Z1 / 2  Z3 B Z2 / 2 ]
        [ Z4  Z4 B Z1 / 2  Z4 A Z2 / 2 ]

    from all six parameters. No constraint is checked.
    """
    coeffs = coeffs or ab_coefficients(theta, phi)
    A, B = coeffs.A, coeffs.B
    Z1 = np.array([[1, 1], [z1, -z1]], dtype=np.complex128)
    Z2 = np.array([[1, 1], [z2, -z2]], dtype=np.complex128)
    Z3 = np.array([[1, z3], [1, -z3]], dtype=np.complex128)
    Z4 = np.array([[1, z4], [1, -z4]], dtype=np.complex128)
    return np.block([
        [F2, Z1, Z2],
        [Z3, Z3 @ A @ Z1 / 2, Z3 @ B @ Z2 / 2],
        [Z4, Z4 @ B @ Z1 / 2, Z4 @ A @ Z2 / 2],
    ])


@dataclass(frozen=True)
class H2Derived:
    """All four phases of an H2Params point, plus the cross-check residual."""
    coeffs: ABCoeffs
    z1: complex
    z2: complex
    z3: complex
    z4: complex
    consistency_residual: float


def derive_h2(params: H2Params, tol: Optional[Tolerances] = None) -> H2Derived:
    """
    Derive z2, z3, z4 from (theta, phi, z1).

    z3^2 = M_A(z1^2), z2^2 = M_B^{-1}(z3^2), z4^2 = M_B(z1^2); then
    M_A(z2^2) = z4^2 is cross-checked.
    """
    tol = _tol(tol)
    coeffs = ab_coefficients(params.theta, params.phi)
    w1 = params.z1 ** 2
    w3 = mobius_apply("A", coeffs, w1, tol)
    w2 = mobius_inverse("B", coeffs, w3, tol)
    w4 = mobius_apply("B", coeffs, w1, tol)
    residual = abs(mobius_apply("A", coeffs, w2, tol) - w4)
    if residual >= tol.eps_match:
        raise ConsistencyFailure(residual)
    return H2Derived(
        coeffs=coeffs,
        z1=params.z1,
        z2=params.s2 * cmath.sqrt(w2),
        z3=params.s3 * cmath.sqrt(w3),
        z4=params.s4 * cmath.sqrt(w4),
        consistency_residual=residual,
    )


def build_h2(params: H2Params, tol: Optional[Tolerances] = None) -> Chm:
    """Build and certify the H2-reducible matrix at a parameter point."""
    tol = _tol(tol)
    z = derive_h2(params, tol)
    M = h2_matrix(params.theta, params.phi, z.z1, z.z2, z.z3, z.z4, coeffs=z.coeffs)
    return validate_chm(M, tol)


def symmetric_h2_params(phi_sign: float, fixed_point_sel: int,
                        tol: Optional[Tolerances] = None) -> H2Params:
    """
    Parameter point of a symmetric H2-reducible matrix.

    phi is 0 or pi and tan(theta) = exp(-i phi), which makes A12 real. z1^2 is
    a fixed point w of M_A, so z3 = z1; the branch signs are chosen so that
    z2 = z4 and entry (3, 4) equals -1.
    """
    tol = _tol(tol)
    if abs(phi_sign) < 1e-12:
        phi, theta = 0.0, math.pi / 4
    elif abs(phi_sign - math.pi) < 1e-12:
        phi, theta = math.pi, 3 * math.pi / 4
    else:
        raise DomainViolation(f"phi_sign must be 0 or pi, got {phi_sign!r}")
    if fixed_point_sel not in (0, 1):
        raise DomainViolation(f"fixed_point_sel must be 0 or 1, got {fixed_point_sel!r}")

    coeffs = ab_coefficients(theta, phi)
    p, q = _mobius_terms("A", coeffs)
    # M_A(w) = w  <=>  conj(q) w^2 - (p + conj p) w + q = 0
    fixed = sorted(np.roots([q.conjugate(), -(p + p.conjugate()), q]),
                   key=lambda r: (np.angle(r), r.real))
    w = complex(fixed[fixed_point_sel])
    if abs(abs(w) - 1.0) > tol.eps_match:
        raise NoUnimodularFixedPoint(abs(w))
    w /= abs(w)

    best = math.inf
    for z1_sign, z2_sign in itertools.product((1, -1), repeat=2):
        z1 = z1_sign * cmath.sqrt(w)
        w3 = mobius_apply("A", coeffs, z1 ** 2, tol)
        w2 = mobius_inverse("B", coeffs, w3, tol)
        w4 = mobius_apply("B", coeffs, z1 ** 2, tol)
        s3 = 1 if abs(cmath.sqrt(w3) - z1) <= abs(cmath.sqrt(w3) + z1) else -1
        z2 = z2_sign * cmath.sqrt(w2)
        s4 = 1 if abs(cmath.sqrt(w4) - z2) <= abs(cmath.sqrt(w4) + z2) else -1
        params = H2Params(theta=theta, phi=phi, z1=z1, s2=z2_sign, s3=s3, s4=s4)
        H = build_h2(params, tol).matrix
        deviation = max(float(np.abs(H - H.T).max()), abs(H[3, 4] + 1))
        if np.abs(H - H.T).max() <= tol.eps_orth and abs(H[3, 4] + 1) <= tol.eps_match:
            return params
        best = min(best, deviation)
    raise SymmetryFailure(best, "No branch choice gives a symmetric matrix with entry (3,4) = -1")


def build_symmetric_h2(phi_sign: float, fixed_point_sel: int,
                       tol: Optional[Tolerances] = None) -> Chm:
    """Symmetric H2-reducible CHM; its entries (3,4) and (4,3) are -1."""
    tol = _tol(tol)
    H = build_h2(symmetric_h2_params(phi_sign, fixed_point_sel, tol), tol)
    deviation = float(np.abs(H.matrix - H.matrix.T).max())
    if deviation > tol.eps_orth:
        raise SymmetryFailure(deviation)
    if abs(H[3, 4] + 1) > tol.eps_match:
        raise SymmetryFailure(abs(H[3, 4] + 1), "Entry (3,4) is not -1")
    return H


# ===========================================
# AFFINE AND CIRCULANT MATRICES
# ===========================================

def build_fourier(d: int = 6, tol: Optional[Tolerances] = None) -> Chm:
    """F_d with entry (j, k) = exp(2 pi i jk / d)."""
    if d < 2:
        raise DomainViolation(f"Fourier dimension must be at least 2, got {d}")
    jk = np.outer(np.arange(d), np.arange(d)) % d
    return validate_chm(np.exp(2j * np.pi * jk / d), tol)


BJORCK_D = complex((1 - math.sqrt(3)) / 2, math.sqrt(math.sqrt(3) / 2))


def build_bjorck(tol: Optional[Tolerances] = None) -> Chm:
    """Bjorck's circulant C_6; each row is the right cyclic shift of the one above."""
    d = BJORCK_D
    first = np.array([1, 1j * d, -d, -1j, -d.conjugate(), 1j * d.conjugate()])
    index = (np.arange(6)[None, :] - np.arange(6)[:, None]) % 6
    return validate_chm(first[index], tol)


# ===========================================
# SZOLLOSI FAMILY
# ===========================================

def discriminant_D(alpha: complex) -> float:
    """D(alpha) = |alpha|^4 + 18|alpha|^2 - 8 Re(alpha^3) - 27."""
    m = abs(alpha) ** 2
    return float(m * m + 18 * m - 8 * (alpha ** 3).real - 27)


def _cubic(alpha: complex):
    coefficients = np.array([1, -alpha, np.conj(alpha), -1], dtype=np.complex128)
    return np.poly1d(coefficients), np.poly1d(coefficients).deriv()


def cubic_roots(alpha: complex) -> np.ndarray:
    """
    Roots of z^3 - alpha z^2 + conj(alpha) z - 1.

    Companion-matrix eigenvalues, clustered roots averaged, simple roots
    given one Newton step; sorted by phase angle, ties by real part.
    """
    f, df = _cubic(alpha)
    roots = np.roots(f.coeffs).astype(np.complex128)

    # multiple roots come back split by ~eps^(1/m); their mean is accurate
    polished = roots.copy()
    for k, r in enumerate(roots):
        cluster = roots[np.abs(roots - r) < 1e-4]
        polished[k] = cluster.mean()
    for k, r in enumerate(polished):
        slope = df(r)
        if abs(slope) > 1e-6:
            polished[k] = r - f(r) / slope

    order = sorted(range(3), key=lambda k: (round(float(np.angle(polished[k])), 12),
                                            float(polished[k].real)))
    return polished[order]


def szollosi_matrix(x: complex, y: complex, u: complex, v: complex) -> CMatrix:
    """The 6x6 Szollosi matrix X(a, b) = H(x, y, u, v), unvalidated."""
    xy = x * y
    return np.array([
        [1, 1, 1, 1, 1, 1],
        [1, x * xy, xy * y, xy / (u * v), u * xy, v * xy],
        [1, x / y, x * xy, x / u, x / v, u * v * x],
        [1, u * v * x, u * xy, -1, -u * xy, -u * v * x],
        [1, x / u, v * xy, -x / u, -1, -v * xy],
        [1, x / v, xy / (u * v), -xy / (u * v), -x / v, -1],
    ], dtype=np.complex128)


def build_szollosi(params: SzollosiParams, tol: Optional[Tolerances] = None) -> Chm:
    """
    Szollosi CHM at alpha with the selected cubic roots.

    Requires D(alpha) <= 0 and D(-alpha) <= 0. A selection that does not
    validate raises the validation error, carrying the deviation.
    """
    tol = _tol(tol)
    alpha = params.alpha
    for a in (alpha, -alpha):
        if discriminant_D(a) > tol.eps_match:
            raise DomainViolation(f"D({a!r}) = {discriminant_D(a):.6g} > 0")

    xs = cubic_roots(alpha)
    us = cubic_roots(-alpha)
    x, y = xs[params.root_sel_x], xs[params.root_sel_y]
    u, v = us[params.root_sel_u], us[params.root_sel_v]
    if abs(x - y) <= tol.eps_match:
        raise RootSelectionError(f"selected roots x and y coincide at alpha={alpha!r}", abs(x - y))
    if abs(u - v) <= tol.eps_match:
        raise RootSelectionError(f"selected roots u and v coincide at alpha={alpha!r}", abs(u - v))
    return validate_chm(szollosi_matrix(x, y, u, v), tol)


def find_szollosi_selection(alpha: complex,
                            tol: Optional[Tolerances] = None) -> Tuple[SzollosiParams, Chm]:
    """Scan the ordered root selections and return the first that validates."""
    last_error: Optional[ChmError] = None
    for sx, sy, su, sv in itertools.product(range(3), repeat=4):
        if sx == sy or su == sv:
            continue
        params = SzollosiParams(alpha=alpha, root_sel_x=sx, root_sel_y=sy,
                                root_sel_u=su, root_sel_v=sv)
        try:
            return params, build_szollosi(params, tol)
        except DomainViolation:
            raise
        except ChmError as e:
            last_error = e
    raise RootSelectionError(f"no root selection validates at alpha={alpha!r}: {last_error}",
                             getattr(last_error, "deviation", float("nan")))


# ===========================================
# HERMITIAN FAMILY
# ===========================================

def hermitian_matrix(theta: float, sqrt_branch: int) -> CMatrix:
    """H(theta) of the Hermitian family, unvalidated."""
    y = cmath.exp(1j * theta)
    s = sqrt_branch * math.sqrt(2) * cmath.sqrt(1 + 2 * y + 2 * y ** 3 + y ** 4)
    x = (1 + 2 * y + y ** 2 - s) / (1 + 2 * y - y ** 2)
    t = (1 + 2 * y + y ** 2 - s) / (-1 + 2 * y + y ** 2)
    z = (1 + 2 * y - y ** 2) / (y * (-1 + 2 * y + y ** 2))
    return np.array([
        [1, 1, 1, 1, 1, 1],
        [1, -1, 1 / x, -y, -1 / x, y],
        [1, x, -1, t, -t, -x],
        [1, -1 / y, 1 / t, -1, 1 / y, -1 / t],
        [1, -x, -1 / t, y, 1, 1 / z],
        [1, 1 / y, -1 / x, -t, z, 1],
    ], dtype=np.complex128)


def _try_hermitian(theta: float, branch: int, tol: Tolerances) -> Optional[Chm]:
    try:
        H = validate_chm(hermitian_matrix(theta, branch), tol)
    except ChmError:
        return None
    if np.abs(H.matrix - H.matrix.conj().T).max() >= tol.eps_orth:
        return None
    return H


def build_hermitian(params: HermitianParams, tol: Optional[Tolerances] = None) -> Chm:
    """
    Hermitian CHM H(theta) on the requested square-root branch.

    Raises WrongBranch (naming the working branch) when only the other
    branch gives a Hermitian CHM, BranchFailure when neither does.
    """
    tol = _tol(tol)
    if not HermitianParams.theta_allowed(params.theta):
        raise DomainViolation(f"theta={params.theta!r} is outside the Hermitian family's range")
    H = _try_hermitian(params.theta, params.sqrt_branch, tol)
    if H is not None:
        return H
    other = -params.sqrt_branch
    if _try_hermitian(params.theta, other, tol) is not None:
        raise WrongBranch(params.theta, params.sqrt_branch, other)
    raise BranchFailure(params.theta)


def build_hermitian_auto(theta: float, tol: Optional[Tolerances] = None) -> Chm:
    """Hermitian CHM on whichever branch works, trying +1 first."""
    try:
        return build_hermitian(HermitianParams(theta=theta, sqrt_branch=1), tol)
    except WrongBranch as e:
        logger.debug("theta=%r needs branch %+d", theta, e.working_branch)
        return build_hermitian(HermitianParams(theta=theta, sqrt_branch=e.working_branch), tol)


# ===========================================
# REGISTRY
# ===========================================

def _complex_param(params: Dict[str, Any], name: str, default: complex = 0j) -> complex:
    """Accept name as [re, im], a number, or name_re / name_im."""
    if name in params:
        value = params[name]
        if isinstance(value, (list, tuple)):
            return complex(float(value[0]), float(value[1]))
        return complex(value)
    return complex(float(params.get(f"{name}_re", default.real)),
                   float(params.get(f"{name}_im", default.imag)))


def _family_h2(params: Dict[str, Any], tol: Tolerances) -> Chm:
    signs = {k: int(params.get(k, 1)) for k in ("s2", "s3", "s4")}
    if "z1_arg" in params or "z1" not in params:
        p = H2Params.from_arg(float(params.get("theta", 0.0)), float(params.get("phi", 0.0)),
                              float(params.get("z1_arg", 0.0)), **signs)
    else:
        p = H2Params(theta=float(params["theta"]), phi=float(params["phi"]),
                     z1=_complex_param(params, "z1"), **signs)
    return build_h2(p, tol)


def _family_szollosi(params: Dict[str, Any], tol: Tolerances) -> Chm:
    alpha = _complex_param(params, "alpha")
    selections = {k: int(params[k]) for k in
                  ("root_sel_x", "root_sel_y", "root_sel_u", "root_sel_v") if k in params}
    if selections:
        return build_szollosi(SzollosiParams(alpha=alpha, **selections), tol)
    return find_szollosi_selection(alpha, tol)[1]


def _family_hermitian(params: Dict[str, Any], tol: Tolerances) -> Chm:
    theta = float(params.get("theta", 2.0))
    if "sqrt_branch" in params:
        return build_hermitian(HermitianParams(theta=theta,
                                               sqrt_branch=int(params["sqrt_branch"])), tol)
    return build_hermitian_auto(theta, tol)


FAMILIES: Dict[str, Callable[[Dict[str, Any], Tolerances], Chm]] = {
    "h2": _family_h2,
    "fourier": lambda p, tol: build_fourier(int(p.get("d", 6)), tol),
    "bjorck": lambda p, tol: build_bjorck(tol),
    "szollosi": _family_szollosi,
    "hermitian": _family_hermitian,
    "symmetric_h2": lambda p, tol: build_symmetric_h2(float(p.get("phi_sign", 0.0)),
                                                      int(p.get("fixed_point_sel", 0)), tol),
}


def build_family(name: str, params: Optional[Dict[str, Any]] = None,
                 tol: Optional[Tolerances] = None) -> Chm:
    """Build a registered family member from a parameter dict."""
    builder = FAMILIES.get(name)
    if builder is None:
        raise UnknownFamily(name, tuple(FAMILIES))
    return builder(params or {}, _tol(tol))
