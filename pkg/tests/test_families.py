import math

import numpy as np
import pytest
from hypothesis import given, reject, settings
import hypothesis.strategies as st

from models.domain import HERMITIAN_THETA_MIN, H2Params, HermitianParams, SzollosiParams
from models.errors import (
    ChmError, DegenerateMobius, DomainViolation, NotUnimodular, UnknownFamily, WrongBranch
)
from models.requests import FamilyRequest
from services.analysis import census
from services.families import (
    ab_coefficients, build_bjorck, build_family, build_fourier, build_h2, build_hermitian,
    build_hermitian_auto, build_symmetric_h2, build_szollosi, cubic_roots, derive_h2,
    discriminant_D, find_szollosi_selection, h2_matrix, hermitian_matrix, mobius_apply,
    mobius_inverse, symmetric_h2_params
)
from tests.conftest import random_h2_params

VALID_ALPHAS = [0.3 + 0.2j, 0.5, 0.1 - 0.4j, 0.7j, -0.2 + 0.1j]
HERMITIAN_THETAS = np.linspace(HERMITIAN_THETA_MIN + 0.05, math.pi, 20)


class TestCoefficients:
    def test_b_is_minus_f2_minus_a(self):
        c = ab_coefficients(0.7, 1.3)
        F2 = np.array([[1, 1], [1, -1]])
        assert np.abs(c.B - (-F2 - c.A)).max() < 1e-12

    @settings(max_examples=1000)
    @given(st.floats(0, math.pi), st.floats(0, 2 * math.pi), st.floats(0, 2 * math.pi),
           st.sampled_from(["A", "B"]))
    def test_mobius_keeps_the_unit_circle(self, theta, phi, arg, kind):
        c = ab_coefficients(theta, phi)
        z = complex(math.cos(arg), math.sin(arg))
        p, q = (c.a12 ** 2, c.a11 ** 2) if kind == "A" else (c.b12 ** 2, c.b11 ** 2)
        # keep clear of the pole, where rounding grows like 1/|denominator|
        if abs(q.conjugate() * z - p.conjugate()) < 1e-3:
            reject()
        w = mobius_apply(kind, c, z)
        assert abs(abs(w) - 1) < 1e-10

    def test_inverse_undoes_the_map(self, rng):
        for _ in range(50):
            c = ab_coefficients(rng.uniform(0.2, 2.9), rng.uniform(0.2, 6.0))
            z = np.exp(1j * rng.uniform(0, 2 * np.pi))
            w = mobius_apply("B", c, z)
            assert abs(mobius_inverse("B", c, w) - z) < 1e-8

    def test_off_circle_input_is_rejected(self):
        with pytest.raises(NotUnimodular):
            mobius_apply("A", ab_coefficients(0.7, 1.3), 1.5)

    def test_degenerate_point(self):
        # theta = phi = 0 collapses M_A to the constant 1 with a pole at w
        c = ab_coefficients(0.0, 0.0)
        omega = complex(math.cos(2 * math.pi / 3), math.sin(2 * math.pi / 3))
        with pytest.raises(DegenerateMobius):
            mobius_apply("A", c, omega)


class TestH2:
    def test_random_points_are_valid(self, rng):
        for params in random_h2_params(rng, 100):
            z = derive_h2(params)
            assert z.consistency_residual < 1e-9
            H = build_h2(params)
            assert H.unimodular_deviation <= 1e-9
            assert H.orthogonality_deviation <= 1e-8

    def test_nine_count_is_generic(self, rng):
        aligned = [((r, r + 1), (c, c + 1)) for r in (0, 2, 4) for c in (0, 2, 4)]
        counts = []
        for params in random_h2_params(rng, 100):
            cen = census(build_h2(params))
            assert all(cen.has(*block) for block in aligned)
            counts.append(cen.count)
        assert sum(1 for n in counts if n == 9) >= 95

    def test_raw_assembly_matches(self, generic_params):
        z = derive_h2(generic_params)
        M = h2_matrix(generic_params.theta, generic_params.phi, z.z1, z.z2, z.z3, z.z4)
        assert np.array_equal(M, build_h2(generic_params).matrix)

    def test_params_are_validated(self):
        with pytest.raises(ValueError):
            H2Params(theta=0.7, phi=1.3, z1=1.1)
        with pytest.raises(ValueError):
            H2Params.from_arg(0.7, 1.3, 0.4, s2=2)

    def test_angles_are_normalized(self):
        p = H2Params.from_arg(-0.5, 7.0, 0.4)
        assert 0 <= p.theta < 2 * math.pi and 0 <= p.phi < 2 * math.pi


class TestFourierAndBjorck:
    def test_fourier_entries(self):
        F = build_fourier(6).matrix
        omega6 = np.exp(2j * np.pi / 6)
        assert abs(F[2, 3] - omega6 ** 6) < 1e-12
        assert abs(F[1, 5] - omega6 ** 5) < 1e-12

    def test_fourier_rejects_small_dimension(self):
        with pytest.raises(DomainViolation):
            build_fourier(1)

    def test_bjorck_is_circulant(self):
        C = build_bjorck().matrix
        for r in range(1, 6):
            assert np.array_equal(C[r], np.roll(C[r - 1], 1))

    def test_bjorck_has_more_than_nine(self):
        assert census(build_bjorck()).count > 9


class TestSzollosi:
    def test_discriminant_at_three(self):
        assert discriminant_D(3) == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("alpha", VALID_ALPHAS)
    def test_cubic_roots(self, alpha):
        roots = cubic_roots(alpha)
        assert abs(np.prod(roots) - 1) < 1e-9
        assert abs(np.sum(roots) - alpha) < 1e-9
        assert np.abs(np.abs(roots) - 1).max() < 1e-6
        angles = np.angle(roots)
        assert list(angles) == sorted(angles)

    def test_triple_root(self):
        roots = cubic_roots(3)
        assert np.abs(roots - 1).max() < 1e-6

    def test_triple_root_is_an_error(self):
        with pytest.raises(ChmError):
            build_szollosi(SzollosiParams(alpha=3))

    def test_outside_domain(self):
        with pytest.raises(DomainViolation):
            build_szollosi(SzollosiParams(alpha=2.5 + 2.5j))

    @pytest.mark.parametrize("alpha", VALID_ALPHAS)
    def test_valid_alpha_gives_more_than_nine(self, alpha):
        params, H = find_szollosi_selection(alpha)
        assert params.alpha == alpha
        assert census(H).count > 9

    def test_selection_must_be_distinct(self):
        with pytest.raises(ValueError):
            SzollosiParams(alpha=0.3, root_sel_x=1, root_sel_y=1)


class TestHermitian:
    @pytest.mark.parametrize("theta", HERMITIAN_THETAS)
    def test_hermitian_members(self, theta):
        H = build_hermitian_auto(theta)
        assert np.abs(H.matrix - H.matrix.conj().T).max() < 1e-8
        assert census(H).count > 18

    def test_wrong_branch_names_the_working_one(self):
        working = {}
        for branch in (1, -1):
            try:
                build_hermitian(HermitianParams(theta=2.0, sqrt_branch=branch))
                working[branch] = branch
            except WrongBranch as e:
                working[branch] = e.working_branch
        assert set(working.values()) <= {1, -1}
        for other in working.values():
            build_hermitian(HermitianParams(theta=2.0, sqrt_branch=other))

    def test_outside_range(self):
        with pytest.raises(DomainViolation):
            build_hermitian(HermitianParams(theta=0.5))

    def test_row_at_pi(self):
        # y = -1, x = i: second row is (1, -1, 1/x, -y, -1/x, y)
        expected = np.array([1, -1, -1j, 1, 1j, -1])
        assert np.abs(hermitian_matrix(math.pi, 1)[1] - expected).max() < 1e-12
        H = build_hermitian(HermitianParams(theta=math.pi, sqrt_branch=1))
        assert np.abs(H[1] - expected).max() < 1e-9

    @pytest.mark.parametrize("theta", -HERMITIAN_THETAS)
    def test_negative_branch(self, theta):
        H = build_hermitian_auto(theta)
        assert np.abs(H.matrix - H.matrix.conj().T).max() < 1e-8
        assert census(H).count > 18


class TestSymmetricH2:
    @pytest.mark.parametrize("phi_sign", [0.0, math.pi])
    @pytest.mark.parametrize("sel", [0, 1])
    def test_minus_one_and_symmetry(self, phi_sign, sel):
        H = build_symmetric_h2(phi_sign, sel)
        assert abs(H[3, 4] + 1) < 1e-9
        assert abs(H[4, 3] + 1) < 1e-9
        assert np.abs(H.matrix - H.matrix.T).max() < 1e-9

    def test_z3_equals_z1(self):
        params = symmetric_h2_params(0.0, 0)
        z = derive_h2(params)
        assert abs(z.z3 - z.z1) < 1e-6
        assert abs(z.z2 - z.z4) < 1e-6

    def test_phi_must_be_zero_or_pi(self):
        with pytest.raises(DomainViolation):
            symmetric_h2_params(1.0, 0)


class TestRegistry:
    def test_known_families(self):
        assert build_family("fourier", {"d": 4}).dim == 4
        assert build_family("h2", {"theta": 0.7, "phi": 1.3, "z1_arg": 0.4}).dim == 6
        assert build_family("szollosi", {"alpha_re": 0.3, "alpha_im": 0.2}).dim == 6
        assert build_family("hermitian", {"theta": 2.0}).dim == 6
        assert build_family("symmetric_h2", {"phi_sign": math.pi}).dim == 6

    def test_unknown_family(self):
        with pytest.raises(UnknownFamily):
            build_family("circulant7")

    def test_request_example_builds(self):
        example = FamilyRequest.model_json_schema()["example"]
        request = FamilyRequest(**example)
        assert build_family(request.family, request.params).dim == 6
