import numpy as np
import pytest
from hypothesis import given, strategies as st

from nlse_tunnel import fields as F, potentials as P
from nlse_tunnel.errors import BlowUpError, ConfigurationError, DimensionError
from nlse_tunnel.grid import make_grid
from nlse_tunnel.solver import SimulationConfig, linear_step, nonlinear_potential_step, run, step
from oracles import lie_step_reference


def zero_potential(grid):
    return P.SampledPotential(grid, P.PotentialSpec())


class TestNonlinearStep:
    def test_zero_field(self, small_grid):
        z = F.WaveField(small_grid, np.zeros(small_grid.n_points))
        out = nonlinear_potential_step(z, zero_potential(small_grid), 0.1)
        assert not out.values.any()

    def test_unit_field_rotates(self, small_grid):
        one = F.WaveField(small_grid, np.ones(small_grid.n_points))
        out = nonlinear_potential_step(one, zero_potential(small_grid), 0.1)
        np.testing.assert_allclose(out.values, np.exp(0.1j), rtol=1e-15)

    def test_zeta_and_potential_enter_phase(self, small_grid):
        g = small_grid
        pot = P.SampledPotential(g, P.PotentialSpec("custom_piecewise", ((g.x_min, 0.0, 2.0),)))
        psi = F.WaveField(g, 0.5 * np.ones(g.n_points))
        out = nonlinear_potential_step(psi, pot, 0.1, zeta=3.0)
        want = 0.5 * np.exp(1j * (3.0 * 0.25 + pot.current_values) * 0.1)
        np.testing.assert_allclose(out.values, want, rtol=1e-15)

    @given(st.integers(0, 2**32 - 1))
    def test_modulus_preserved(self, seed):
        g = make_grid(256, -20.0, 40.0)
        rng = np.random.default_rng(seed)
        psi = F.WaveField(g, 3 * (rng.normal(size=256) + 1j * rng.normal(size=256)))
        pot = P.SampledPotential(g, P.single_rectangular_spec(1.0, seed)).refresh_noise(0)
        out = nonlinear_potential_step(psi, pot, 1e-3)
        np.testing.assert_allclose(out.modulus, psi.modulus, rtol=1e-15)

    def test_grid_mismatch(self, grid, small_grid):
        with pytest.raises(DimensionError):
            nonlinear_potential_step(F.plane_wave(grid), zero_potential(small_grid), 0.1)


class TestLinearStep:
    def test_constant_unchanged(self, small_grid):
        one = F.WaveField(small_grid, np.ones(small_grid.n_points))
        np.testing.assert_allclose(linear_step(one, 0.5, 1e-3).values, 1.0, atol=1e-15)

    def test_single_mode(self, grid):
        k = 2 * np.pi * 7 / grid.length
        f = F.WaveField(grid, np.exp(1j * k * grid.x))
        out = linear_step(f, 0.5, 1e-3)
        np.testing.assert_allclose(out.values, f.values * np.exp(-1j * k * k * 5e-4), atol=1e-13)

    def test_norm_preserved(self, grid):
        f = F.sech_soliton(grid, 0.0, 0.5)
        out = linear_step(f, 0.5, 1e-3)
        assert out.norm() == pytest.approx(f.norm(), rel=1e-13)


class TestStep:
    def test_zero_field(self, small_grid):
        z = F.WaveField(small_grid, np.zeros(small_grid.n_points))
        pot = P.SampledPotential(small_grid, P.single_rectangular_spec(1.0, 1))
        assert not step(z, pot, SimulationConfig(), 0).values.any()

    def test_lie_matches_written_out_scheme(self, grid):
        psi = F.plane_wave(grid, 1.0)
        cfg = SimulationConfig(dt=1e-3)
        pot = P.SampledPotential(grid, P.single_rectangular_spec(1.0, 5))
        got = step(psi, pot, cfg, 12)
        m = pot.base_values + P.noise_realization(5, 12, grid.n_points)
        want = lie_step_reference(psi.values, m, grid.k, 0.5, 1.0, 1e-3)
        np.testing.assert_allclose(got.values, want, atol=1e-14)
        assert got.time == pytest.approx(1e-3)

    def test_strang_is_half_full_half(self, grid):
        psi = F.sech_soliton(grid, 0.0, 0.5)
        cfg = SimulationConfig(dt=2e-3, splitting="strang")
        pot = P.SampledPotential(grid, P.triangular_spec(1.0, 8))
        got = step(psi, pot, cfg, 3)
        pot.refresh_noise(3)
        half = linear_step(psi, 0.5, 1e-3)
        want = linear_step(nonlinear_potential_step(half, pot, 2e-3), 0.5, 1e-3)
        np.testing.assert_allclose(got.values, want.values, atol=1e-14)


class TestConfig:
    @pytest.mark.parametrize("kw", [dict(dt=0.0), dict(dt=-1e-3), dict(t_end=1e-4), dict(snapshot_every=0),
                                    dict(snapshot_every=1.5), dict(splitting="rk4"), dict(seed=-1)])
    def test_invalid(self, kw):
        with pytest.raises(ConfigurationError):
            SimulationConfig(**kw)

    def test_defaults(self):
        c = SimulationConfig()
        assert (c.beta, c.zeta, c.dt, c.splitting) == (0.5, 1.0, 1e-3, "lie_verbatim")
        assert SimulationConfig(t_end=1.0).n_steps == 1000


class TestRun:
    def test_single_step_trajectory(self, small_grid):
        cfg = SimulationConfig(dt=1e-3, t_end=1e-3, snapshot_every=1)
        traj = run(F.plane_wave(small_grid), P.single_rectangular_spec(1.0), cfg)
        assert len(traj) == 2
        np.testing.assert_allclose(traj.times, [0.0, 1e-3])

    def test_snapshot_spacing(self, small_grid):
        cfg = SimulationConfig(dt=1e-3, t_end=0.1, snapshot_every=7)
        traj = run(F.sech_soliton(small_grid), P.PotentialSpec(), cfg)
        assert len(traj) == 100 // 7 + 1
        np.testing.assert_allclose(np.diff(traj.times), 7e-3)
        assert np.all(traj.norms > 0)

    def test_deterministic(self, grid):
        cfg = SimulationConfig(t_end=0.2, snapshot_every=50, seed=123)
        a = run(F.plane_wave(grid), P.single_rectangular_spec(1.0), cfg)
        b = run(F.plane_wave(grid), P.single_rectangular_spec(1.0), cfg)
        assert a.values.tobytes() == b.values.tobytes()

    def test_seed_comes_from_config(self, small_grid):
        cfg = SimulationConfig(t_end=0.05, snapshot_every=50, seed=4)
        a = run(F.plane_wave(small_grid), P.single_rectangular_spec(1.0, seed=1), cfg)
        b = run(F.plane_wave(small_grid), P.single_rectangular_spec(1.0, seed=2), cfg)
        c = run(F.plane_wave(small_grid), P.single_rectangular_spec(1.0), SimulationConfig(t_end=0.05, seed=5, snapshot_every=50))
        assert np.array_equal(a.values, b.values) and not np.array_equal(a.values, c.values)

    def test_initial_time_offset(self, grid):
        cfg = SimulationConfig(t_end=0.5, snapshot_every=250, splitting="strang")
        traj = run(F.peregrine(grid, -0.5), P.PotentialSpec(), cfg)
        np.testing.assert_allclose(traj.times, [-0.5, -0.25, 0.0], atol=1e-15)

    def test_blow_up_reports_step(self, small_grid, monkeypatch):
        original = P.SampledPotential.refresh_noise

        def poisoned(self, step_index):
            original(self, step_index)
            if step_index == 7:
                self.current_values[3] = np.nan
            return self

        monkeypatch.setattr(P.SampledPotential, "refresh_noise", poisoned)
        with pytest.raises(BlowUpError) as info:
            run(F.plane_wave(small_grid), P.PotentialSpec(), SimulationConfig(t_end=0.02, snapshot_every=1))
        assert info.value.step_index == 7

    @given(st.integers(0, 2**63))
    def test_norm_conserved_with_noise(self, seed):
        g = make_grid(256, -20.0, 40.0)
        cfg = SimulationConfig(t_end=0.3, snapshot_every=100, seed=seed)
        traj = run(F.plane_wave(g), P.triangular_spec(1.0), cfg)
        assert np.max(np.abs(traj.norms / traj.norms[0] - 1)) < 1e-12

    def test_soliton_moves_at_minus_two(self, grid):
        cfg = SimulationConfig(t_end=3.0, snapshot_every=500, splitting="strang")
        traj = run(F.sech_soliton(grid), P.PotentialSpec(), cfg)
        peaks = grid.x[np.argmax(np.abs(traj.values), axis=1)]
        assert np.all(np.abs(peaks + 2 * traj.times) <= grid.dx * np.maximum(traj.times, 1.0))

    @pytest.mark.parametrize("splitting,tol", [("lie_verbatim", 1e-2), ("strang", 1e-4)])
    def test_soliton_regression(self, grid, splitting, tol):
        cfg = SimulationConfig(t_end=1.0, snapshot_every=1000, splitting=splitting)
        traj = run(F.sech_soliton(grid), P.PotentialSpec(), cfg)
        assert np.max(np.abs(traj.values[-1] - F.sech_soliton(grid, 1.0).values)) < tol
