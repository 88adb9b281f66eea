import math

import numpy as np
import pytest

from models.domain import HERMITIAN_THETA_MIN, SearchConfig
from models.errors import UnknownFamily
from services.mub import is_mub_set
from services.search import (
    BOUNDED_NOTE, SIX_NOTE, family_scan, grid_points, parse_grid_spec, random_h2_points,
    random_unitary, restart_seed, seek_trio, trace_frame, trio_defect
)


class TestSeeding:
    def test_restart_seed_matches_spawn(self):
        children = np.random.SeedSequence(42).spawn(5)
        for k in range(5):
            assert np.array_equal(restart_seed(42, k).generate_state(4),
                                  children[k].generate_state(4))

    def test_random_unitary(self, rng):
        U = random_unitary(6, rng)
        assert np.abs(U.conj().T @ U - np.eye(6)).max() < 1e-12


class TestSeekTrio:
    @pytest.mark.slow
    @pytest.mark.parametrize("d", [3, 4])
    def test_small_dimensions_converge(self, d):
        result = seek_trio(SearchConfig(dim=d, restarts=8, max_iters=10_000, master_seed=7,
                                        target_defect=1e-8, stagnation_window=500, workers=4))
        assert result.best_defect < 1e-8
        ok, _ = is_mub_set(result.best_bases)
        assert ok
        assert result.note == ""

    @pytest.mark.slow
    def test_pair_in_dimension_two_converges(self):
        result = seek_trio(SearchConfig(dim=2, bases=2, restarts=8, max_iters=10_000,
                                        master_seed=7, target_defect=1e-8,
                                        stagnation_window=500, workers=4))
        assert len(result.best_bases) == 2
        assert result.best_defect < 1e-8
        assert result.note == ""

    def test_trio_in_dimension_two_stays_bounded(self):
        # only three bases of C^2 can be mutually unbiased
        result = seek_trio(SearchConfig(dim=2, restarts=2, max_iters=200, master_seed=7,
                                        target_defect=1e-8, stagnation_window=100, workers=2))
        assert len(result.best_bases) == 3
        assert result.note == BOUNDED_NOTE
        assert result.best_defect > 1e-3

    def test_independent_of_worker_count(self):
        base = dict(dim=4, restarts=3, max_iters=40, master_seed=11,
                    target_defect=1e-8, stagnation_window=500)
        serial = seek_trio(SearchConfig(workers=1, **base))
        parallel = seek_trio(SearchConfig(workers=4, **base))
        assert serial.model_dump() == parallel.model_dump()

    def test_histories_are_monotone(self):
        result = seek_trio(SearchConfig(dim=3, restarts=2, max_iters=30, master_seed=3,
                                        target_defect=1e-12, stagnation_window=500, workers=1))
        for history in result.histories:
            assert all(b <= a for a, b in zip(history, history[1:]))
        assert result.best_defect == pytest.approx(min(result.trace), rel=1e-12)
        assert result.best_defect == pytest.approx(trio_defect(result.best_bases))

    def test_bases_are_unitary(self):
        result = seek_trio(SearchConfig(dim=4, restarts=1, max_iters=20, workers=1))
        for U in result.best_bases:
            assert np.abs(U.conj().T @ U - np.eye(4)).max() < 1e-10

    def test_dimension_six_is_reported_not_claimed(self):
        result = seek_trio(SearchConfig(dim=6, restarts=2, max_iters=10, workers=2))
        assert result.note == SIX_NOTE
        assert result.seeds == [[0, 0], [0, 1]]
        assert len(result.iterations_used) == 2
        assert all(1 <= n <= 10 for n in result.iterations_used)

    def test_pair_in_dimension_six_has_no_note(self):
        result = seek_trio(SearchConfig(dim=6, bases=2, restarts=1, max_iters=5, workers=1))
        assert len(result.best_bases) == 2
        assert result.note == ""

    def test_trace_frame(self):
        result = seek_trio(SearchConfig(dim=3, restarts=2, max_iters=5, workers=1))
        frame = trace_frame(result)
        assert list(frame.columns) == ["restart", "iteration", "defect"]
        assert len(frame) == sum(len(h) for h in result.histories)
        assert set(frame["restart"]) == {0, 1}


class TestGrid:
    def test_parse_grid_spec(self):
        axes = parse_grid_spec("theta=0:1:3; s2=1,-1; d=6")
        assert axes == {"theta": [0.0, 0.5, 1.0], "s2": [1, -1], "d": [6]}

    def test_malformed_axis(self):
        with pytest.raises(ValueError):
            parse_grid_spec("theta")

    def test_points_last_axis_fastest(self):
        points = grid_points({"a": [1, 2], "b": [3, 4]})
        assert points == [{"a": 1, "b": 3}, {"a": 1, "b": 4}, {"a": 2, "b": 3}, {"a": 2, "b": 4}]


class TestFamilyScan:
    def test_hermitian_line_is_excluded(self):
        lin = np.linspace(HERMITIAN_THETA_MIN + 0.01, math.pi, 50)
        frame = family_scan("hermitian", {"theta": np.concatenate([lin, -lin])})
        assert len(frame) == 100
        assert (frame["error"] == "").all()
        assert (frame["verdict"] == "ExcludedNineCount").all()

    def test_random_h2_points_are_mostly_nine(self):
        frame = family_scan("h2", random_h2_points(200, seed=1))
        assert len(frame) == 200
        assert (frame["census_count"] == 9).sum() >= 190

    def test_fourier_grid_string(self):
        frame = family_scan("fourier", "d=4,6")
        assert list(frame["census_count"]) == [16, 45]

    def test_constructor_errors_become_rows(self):
        frame = family_scan("szollosi", [{"alpha_re": 0.3, "alpha_im": 0.2},
                                         {"alpha_re": 2.5, "alpha_im": 2.5}])
        assert frame.loc[0, "error"] == ""
        assert frame.loc[1, "error"].startswith("DomainViolation")
        assert frame.loc[1, "verdict"] == ""

    def test_unknown_family(self):
        with pytest.raises(UnknownFamily):
            family_scan("circulant7", {"d": [6]})
