import itertools
import math

import numpy as np
import pytest

from models.domain import H2Params, MonomialUnitary
from models.errors import DomainViolation
from services.analysis import (
    census, cross_ratios, dephased_minus_ones, fingerprint, is_h2_reducible,
    real_block_search, shared_corner_pairs
)
from services.core import apply_monomial, validate_chm
from services.families import (
    build_bjorck, build_fourier, build_h2, build_hermitian_auto, build_symmetric_h2,
    find_szollosi_selection
)
from tests.conftest import random_h2_params


def fourier_oracle(d):
    """Positions whose 2x2 Fourier submatrix is Hadamard: (j-i)(l-k) = d/2 mod d."""
    pairs = list(itertools.combinations(range(d), 2))
    if d % 2:
        return []
    return [(r, c) for r in pairs for c in pairs
            if ((r[1] - r[0]) * (c[1] - c[0])) % d == d // 2]


class TestCensus:
    def test_fourier_six(self, f6):
        cen = census(f6)
        assert cen.count == 45
        assert cen.positions == fourier_oracle(6)
        assert cen.borderline == []

    def test_generic_h2_is_the_aligned_nine(self, generic_h2):
        aligned = [((r, r + 1), (c, c + 1)) for r in (0, 2, 4) for c in (0, 2, 4)]
        assert census(generic_h2).positions == aligned

    def test_hermitian_has_more_than_eighteen(self):
        assert census(build_hermitian_auto(2.0)).count > 18

    def test_invariant_under_monomials(self, f6, c6, generic_h2, rng):
        for H in (f6, c6, generic_h2):
            expected = census(H).count
            for _ in range(100):
                P, Q = MonomialUnitary.random(6, rng), MonomialUnitary.random(6, rng)
                assert census(apply_monomial(H, P, Q)).count == expected

    def test_count_bound(self, f6):
        assert census(f6).count <= math.comb(6, 2) ** 2


class TestReducibility:
    def test_h2_and_fourier_are_reducible(self, generic_h2, f6):
        assert is_h2_reducible(generic_h2)
        assert is_h2_reducible(f6)

    @pytest.mark.parametrize("d", [3, 5])
    def test_odd_fourier_is_not(self, d):
        # omega^m = -1 has no solution for odd d
        assert census(build_fourier(d)).count == 0
        assert not is_h2_reducible(build_fourier(d))


class TestRealBlocks:
    def test_fourier_rows_zero_and_three(self, f6):
        report = real_block_search(f6, 2, 3)
        assert report.shape == (2, 3)
        assert ((0, 3), (0, 2, 4)) in report.blocks

    def test_h2_with_z1_minus_one(self):
        H = build_h2(H2Params.from_arg(0.7, 1.3, math.pi))
        assert ((0, 1), (0, 1, 2)) in real_block_search(H, 2, 3).blocks
        assert ((0, 1), (0, 1, 2, 3)) in real_block_search(H, 2, 4).blocks

    def test_generic_h2_has_none(self, generic_h2, rng):
        for params in [None] + random_h2_params(rng, 20):
            H = generic_h2 if params is None else build_h2(params)
            assert not real_block_search(H, 2, 3).found
            assert not real_block_search(H, 3, 2).found

    def test_sub_blocks_pass_too(self, f6):
        for rows, cols in real_block_search(f6, 2, 3).blocks:
            for pair in itertools.combinations(cols, 2):
                assert (rows, pair) in real_block_search(f6, 2, 2).blocks

    def test_shape_bounds(self, f6):
        with pytest.raises(DomainViolation):
            real_block_search(f6, 1, 3)
        with pytest.raises(DomainViolation):
            real_block_search(f6, 2, 7)


class TestSharedCorners:
    def test_fourier_has_pairs(self, f6):
        assert shared_corner_pairs(census(f6))

    def test_generic_h2_has_none(self, generic_h2):
        assert shared_corner_pairs(census(generic_h2)) == []

    def test_hermitian_has_pairs(self):
        assert shared_corner_pairs(census(build_hermitian_auto(2.0)))

    @pytest.mark.parametrize("build", [
        build_bjorck, lambda: find_szollosi_selection(0.3 + 0.2j)[1],
    ], ids=["bjorck", "szollosi"])
    def test_more_than_nine_has_pairs(self, build):
        cen = census(build())
        assert cen.count > 9
        assert shared_corner_pairs(cen)

    @pytest.mark.parametrize("phi_sign, sel", [(0.0, 0), (0.0, 1), (math.pi, 0), (math.pi, 1)])
    def test_symmetric_h2_pairs_follow_count(self, phi_sign, sel):
        cen = census(build_symmetric_h2(phi_sign, sel))
        if cen.count > 9:
            assert shared_corner_pairs(cen)

    def test_pairs_meet_in_one_cell(self, f6):
        for a, b in shared_corner_pairs(census(f6)):
            assert len(set(a[0]) & set(b[0])) == 1
            assert len(set(a[1]) & set(b[1])) == 1


class TestFingerprint:
    def test_invariant_under_monomials(self, f6, generic_h2, rng):
        for H in (f6, generic_h2):
            expected = fingerprint(H)
            for _ in range(100):
                P, Q = MonomialUnitary.random(6, rng), MonomialUnitary.random(6, rng)
                assert fingerprint(apply_monomial(H, P, Q)) == expected

    def test_fourier_differs_from_bjorck(self, f6, c6):
        assert fingerprint(f6) != fingerprint(c6)
        assert fingerprint(f6) == fingerprint(build_fourier(6))

    def test_hadamard_submatrix_has_cross_ratio_minus_one(self, f6):
        ratios = cross_ratios(f6)
        pairs = list(itertools.combinations(range(6), 2))
        for rows, cols in census(f6).positions:
            assert abs(ratios[pairs.index(rows), pairs.index(cols)] + 1) < 1e-12


class TestMinusOnes:
    def test_bjorck(self, c6):
        assert (1, 1) in dephased_minus_ones(c6)

    def test_fourier(self, f6):
        expected = [(j, k) for j in range(6) for k in range(6) if (j * k) % 6 == 3]
        assert dephased_minus_ones(f6) == expected

    def test_accepts_plain_arrays(self, f6):
        assert dephased_minus_ones(np.array(f6.matrix)) == dephased_minus_ones(validate_chm(f6.matrix))
