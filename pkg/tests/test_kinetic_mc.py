import numpy as np
import pytest
from scipy import stats

import thermeit.kinetic_mc as kmc
from thermeit.kinetic_mc import (AtomState, McConfig, NonStationaryError, averaging_window,
                                 max_time_step, simulate_chi, simulate_chi_grid)
from thermeit.params import BeamParams, MediumParams
from thermeit.presets import MC_BEAMS, MC_K, MC_MEDIUM
from thermeit.susceptibility import chi31_general
from thermeit.velocity import one_photon_K

# scaled units: v_th q1 = 2, Gamma_d = 2
DOPPLER = MediumParams(v_th=1.0, gamma=0.0, Gamma_d=2.0, Gamma_21=1.0)
NO_PUMP = BeamParams(q1=2.0, Omega_2=0.0)


def quick_cfg(medium, beams, n=4000, seed=3, windows=3.2):
    dt = max_time_step(medium, beams)
    return McConfig(n_atoms=n, dt=dt, t_total=windows * averaging_window(medium, beams), seed=seed,
                    chunk_size=500)


class TestConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            McConfig(0, 0.1, 1.0, 1)
        with pytest.raises(ValueError):
            McConfig(10, 0.0, 1.0, 1)
        with pytest.raises(ValueError):
            McConfig(10, 0.1, 1.0, None)
        with pytest.raises(ValueError):
            McConfig(10, 0.1, 1.0, -1)

    def test_default_blocks(self):
        assert McConfig(10_000, 0.1, 1.0, 1).block_size == 500
        assert McConfig(100_000, 0.1, 1.0, 1).block_size == 5000
        assert McConfig(10**7, 0.1, 1.0, 1).block_size == 5000
        assert McConfig(7, 0.1, 1.0, 1).block_size == 1
        assert McConfig(10_000, 0.1, 1.0, 1, chunk_size=123).block_size == 123

    def test_step_bound(self):
        assert max_time_step(MC_MEDIUM, MC_BEAMS) == pytest.approx(0.1 / 2.625)
        cfg = McConfig(100, 0.05, 100.0, 1)
        with pytest.raises(ValueError, match="stability bound"):
            simulate_chi(MC_K, 0.0, MC_MEDIUM, MC_BEAMS, cfg)

    def test_too_short(self):
        cfg = McConfig(100, 0.03, 1.0, 1)
        with pytest.raises(ValueError, match="burn-in"):
            simulate_chi(MC_K, 0.0, MC_MEDIUM, MC_BEAMS, cfg)

    def test_window(self):
        K = one_photon_K(0.0, MC_MEDIUM, 2.0).real
        assert averaging_window(MC_MEDIUM, MC_BEAMS) == pytest.approx(5 / (0.1 + K))
        with pytest.raises(ValueError):
            averaging_window(DOPPLER.with_(Gamma_21=0.0), NO_PUMP)

    def test_atom_state_guard(self):
        ok = np.zeros((1, 2), complex)
        with pytest.raises(ArithmeticError):
            AtomState(ok, np.full((1, 2), 2.0 + 0j), np.zeros((2, 3)), np.zeros((2, 3)))
        with pytest.raises(ArithmeticError):
            AtomState(np.full((1, 2), np.nan + 0j), ok, np.zeros((2, 3)), np.zeros((2, 3)))


class TestPhysics:
    def test_doppler_voigt(self):
        for d1 in (-4.0, -2.0, 0.0, 2.0, 4.0):
            beams = NO_PUMP.with_(Delta_1=d1)
            chi, err = simulate_chi(0.0, 0.0, DOPPLER, beams, quick_cfg(DOPPLER, beams))
            ref = 1j * one_photon_K(d1, DOPPLER, 2.0)
            assert abs(chi - ref) < 3 * err

    def test_zero_temperature(self):
        med = MediumParams(v_th=1e-12, gamma=0.0, Gamma_d=2.0, Gamma_21=0.1)
        beams = BeamParams(q1=2.0, Omega_2=1.0, Delta_1=0.5)
        deltas = [-1.0, 0.0, 0.7]
        res = simulate_chi_grid(deltas, 0.0, 0.0, med, beams, quick_cfg(med, beams, n=50))
        xi1 = 0.5 + 2j
        xi2 = np.array(deltas) + 0.1j
        algebraic = -xi2 / (xi1 * xi2 - 1.0)
        np.testing.assert_allclose(res.chi, algebraic, rtol=1e-6)
        np.testing.assert_allclose(res.chi, chi31_general(0.0, 0.0, med, beams, delta=deltas),
                                   rtol=1e-6)

    def test_dicke_transition_point(self):
        beams = MC_BEAMS
        cfg = McConfig(n_atoms=10_000, dt=0.035, t_total=5 * averaging_window(MC_MEDIUM, beams),
                       seed=99)
        chi, err = simulate_chi(MC_K, 0.0, MC_MEDIUM, beams, cfg)
        ref = chi31_general(MC_K, 0.0, MC_MEDIUM, beams)
        assert abs(chi - ref) < 3 * err

    def test_maxwellian_marginal(self):
        cfg = quick_cfg(MC_MEDIUM, MC_BEAMS, n=5000)
        res = simulate_chi_grid([0.0], MC_K, 0.0, MC_MEDIUM, MC_BEAMS, cfg, check=False)
        for axis in range(3):
            assert stats.kstest(res.final_state.v[:, axis], "norm", args=(0.0, 1.0)).pvalue > 0.01

    def test_positions_follow_velocities(self):
        cfg = quick_cfg(DOPPLER, NO_PUMP, n=100)
        res = simulate_chi_grid([0.0], 0.0, 0.0, DOPPLER, NO_PUMP, cfg)
        # no collisions: r = v t
        t = res.n_steps * cfg.dt
        np.testing.assert_allclose(res.final_state.r, res.final_state.v * t, rtol=1e-9, atol=1e-12)


class TestContracts:
    def test_deterministic(self):
        cfg = quick_cfg(MC_MEDIUM, MC_BEAMS, n=600)
        a = simulate_chi_grid([-1.0, 0.5], MC_K, 0.0, MC_MEDIUM, MC_BEAMS, cfg, check=False)
        b = simulate_chi_grid([-1.0, 0.5], MC_K, 0.0, MC_MEDIUM, MC_BEAMS, cfg, check=False)
        np.testing.assert_array_equal(a.chi, b.chi)
        np.testing.assert_array_equal(a.stderr, b.stderr)
        c = simulate_chi_grid([-1.0, 0.5], MC_K, 0.0, MC_MEDIUM, MC_BEAMS,
                              McConfig(600, cfg.dt, cfg.t_total, seed=4, chunk_size=500), check=False)
        assert not np.array_equal(a.chi, c.chi)

    def test_linear_in_drive(self):
        cfg = quick_cfg(MC_MEDIUM, MC_BEAMS, n=600)
        a = simulate_chi_grid([0.0], MC_K, 0.0, MC_MEDIUM, MC_BEAMS, cfg, drive=1e-3, check=False)
        b = simulate_chi_grid([0.0], MC_K, 0.0, MC_MEDIUM, MC_BEAMS, cfg, drive=2e-3, check=False)
        np.testing.assert_allclose(b.final_state.rho31, 2 * a.final_state.rho31, rtol=1e-10)
        np.testing.assert_allclose(b.chi, a.chi, rtol=1e-10)

    def test_chunking_blocks(self):
        cfg = quick_cfg(MC_MEDIUM, MC_BEAMS, n=1000)
        res = simulate_chi_grid([0.0], MC_K, 0.0, MC_MEDIUM, MC_BEAMS, cfg, check=False)
        assert res.final_state.v.shape == (1000, 3)
        assert np.all(np.isfinite(res.stderr)) and np.all(res.stderr > 0)

    def test_non_stationary(self, monkeypatch):
        monkeypatch.setattr(kmc, "NONSTATIONARY_SIGMAS", 0.0)
        cfg = quick_cfg(MC_MEDIUM, MC_BEAMS, n=600)
        with pytest.raises(NonStationaryError):
            simulate_chi_grid([0.0], MC_K, 0.0, MC_MEDIUM, MC_BEAMS, cfg)
