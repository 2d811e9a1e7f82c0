import math
import warnings

import pytest

from tvrec.experiments import (PhaseCell, PhaseConfig, PhaseGrid,
                               fit_transition_slope, run_phase_grid,
                               run_uniqueness_mc)


def synthetic_grid(n_to_mstar, m_values, trials=10, threshold_rate=0.5):
    """Grid whose interpolated crossing sits exactly at m*(n): rate 0 below,
    exactly the threshold at m*, 1 above."""
    cells = {}
    for n, m_star in n_to_mstar.items():
        for m in m_values(n):
            if m < m_star:
                rate = 0.0
            elif m == m_star:
                rate = threshold_rate
            else:
                rate = 1.0
            cells[(n, m)] = PhaseCell(1.0 - rate, rate, trials)
    cfg = PhaseConfig(n_list=tuple(n_to_mstar), trials=trials,
                      m_grid={n: tuple(m_values(n)) for n in n_to_mstar})
    return PhaseGrid(cells, cfg, {})


class TestPhaseConfig:
    def test_default_m_values(self):
        cfg = PhaseConfig(n_list=(32,), s=5)
        assert cfg.m_values(32) == tuple(range(2, 33, 2))

    def test_validation(self):
        with pytest.raises(ValueError):
            PhaseConfig(trials=0)
        with pytest.raises(ValueError):
            PhaseConfig(ensemble="bogus")
        with pytest.raises(ValueError):
            PhaseConfig(n_list=(4,), s=5)
        with pytest.raises(ValueError):
            PhaseConfig(n_list=(8,), m_grid={8: (10,)})


class TestRunPhaseGrid:
    def test_square_system_always_succeeds(self):
        cfg = PhaseConfig(s=2, n_list=(16,), m_grid={16: (16,)}, trials=5,
                          ensemble="rademacher", seed=3)
        grid = run_phase_grid(cfg)
        assert grid.cells[(16, 16)].success_rate == 1.0

    def test_square_system_succeeds_at_scale(self):
        # random +-1 square matrices are almost surely invertible, so the
        # feasible set is a single point at any size
        cfg = PhaseConfig(s=5, n_list=(256,), m_grid={256: (256,)}, trials=10,
                          ensemble="rademacher", seed=13)
        grid = run_phase_grid(cfg)
        assert grid.cells[(256, 256)].success_rate == 1.0

    def test_single_measurement_never_succeeds(self):
        cfg = PhaseConfig(s=5, n_list=(64,), m_grid={64: (1,)}, trials=10,
                          ensemble="rademacher", seed=4)
        grid = run_phase_grid(cfg)
        assert grid.cells[(64, 1)].success_rate == 0.0
        assert grid.cells[(64, 1)].mean_error > 0.1

    def test_reproducible_and_worker_independent(self):
        cfg = PhaseConfig(s=1, n_list=(12, 16), m_grid={12: (4, 8), 16: (6, 12)},
                          trials=3, ensemble="gaussian", seed=9)
        g1 = run_phase_grid(cfg, workers=1)
        g2 = run_phase_grid(cfg, workers=2)
        assert g1.cells.keys() == g2.cells.keys()
        for key in g1.cells:
            assert g1.cells[key].mean_error == g2.cells[key].mean_error
            assert g1.cells[key].success_rate == g2.cells[key].success_rate

    def test_trial_seeds_recorded(self):
        cfg = PhaseConfig(s=1, n_list=(8,), m_grid={8: (4,)}, trials=2, seed=1)
        grid = run_phase_grid(cfg)
        assert len(grid.trial_seeds[(8, 4)]) == 2


class TestFitTransitionSlope:
    def test_exact_quarter_power_law(self):
        # m*(n) = 4 n^(1/4) is integral at n = 16, 81, 256, 625
        grid = synthetic_grid({16: 8, 81: 12, 256: 16, 625: 20},
                              lambda n: range(2, min(n, 23), 2))
        fit = fit_transition_slope(grid, 0.5)
        assert fit.slope == pytest.approx(0.25, abs=1e-9)
        assert fit.intercept == pytest.approx(math.log(4.0), abs=1e-9)
        assert fit.residual_sumsq <= 1e-18

    def test_constant_crossing(self):
        grid = synthetic_grid({16: 6, 32: 6, 64: 6, 128: 6},
                              lambda n: range(2, 13, 2))
        fit = fit_transition_slope(grid, 0.5)
        assert fit.slope == pytest.approx(0.0, abs=1e-9)

    def test_row_without_crossing_warns_and_drops(self):
        grid = synthetic_grid({16: 8, 81: 12, 256: 16, 625: 20},
                              lambda n: range(2, min(n, 23), 2))
        grid.cells.update({(7, m): PhaseCell(1.0, 0.0, 10) for m in (2, 4, 6)})
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            fit = fit_transition_slope(grid, 0.5)
        assert any("n=7" in str(w.message) for w in caught)
        assert fit.slope == pytest.approx(0.25, abs=1e-9)

    def test_too_few_rows_errors(self):
        grid = synthetic_grid({16: 8, 81: 12}, lambda n: range(2, min(n, 23), 2))
        with pytest.raises(ValueError):
            fit_transition_slope(grid, 0.5)

    def test_threshold_validation(self):
        grid = synthetic_grid({16: 8, 81: 12, 256: 16}, lambda n: range(2, min(n, 23), 2))
        with pytest.raises(ValueError):
            fit_transition_slope(grid, 1.5)

    def test_alt_fit_reported(self):
        grid = synthetic_grid({16: 8, 81: 12, 256: 16, 625: 20},
                              lambda n: range(2, min(n, 23), 2))
        fit = fit_transition_slope(grid, 0.5)
        assert math.isfinite(fit.alt_slope)
        assert fit.alt_residual_sumsq >= 0.0


class TestUniquenessMc:
    def test_identity_always_unique(self):
        result = run_uniqueness_mc("identity", 10, 10, 2, trials=10, seed=2)
        assert result.fraction == 1.0
        assert result.mismatches == 0

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            run_uniqueness_mc("gaussian", 12, 0, 2, trials=5, seed=0)
        with pytest.raises(ValueError):
            run_uniqueness_mc("gaussian", 24, 4, 2, trials=5, seed=0)
        with pytest.raises(ValueError):
            run_uniqueness_mc("bogus", 12, 4, 2, trials=5, seed=0)

    def test_single_measurement_fraction_zero(self):
        result = run_uniqueness_mc("gaussian", 12, 1, 2, trials=50, seed=6)
        assert result.fraction == 0.0

    def test_sharp_rise_in_m(self):
        fractions = []
        for m in range(2, 17, 2):
            r = run_uniqueness_mc("gaussian", 16, m, 1, trials=100, seed=5)
            assert r.mismatches == 0
            fractions.append(r.fraction)
        steps = [b - a for a, b in zip(fractions, fractions[1:])]
        assert max(steps) > 0.3
        assert fractions[-1] == 1.0
