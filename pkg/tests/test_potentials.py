import numpy as np
import pytest
from hypothesis import given, strategies as st

from nlse_tunnel import potentials as P
from nlse_tunnel.errors import ConfigurationError
from oracles import literal_double, literal_single, literal_triangular

BUILDERS = [
    (P.build_single_rectangular, literal_single),
    (P.build_double_rectangular, literal_double),
    (P.build_triangular, literal_triangular),
]


def at(pot, x):
    return pot.base_values[np.argmin(np.abs(pot.grid.x - x))]


@pytest.mark.parametrize("builder,literal", BUILDERS)
def test_matches_literal_heaviside_formula(grid, builder, literal):
    pot = builder(grid, 0.0, 0)
    np.testing.assert_array_equal(pot.base_values, literal(grid.x))


@pytest.mark.parametrize("builder,literal", BUILDERS)
def test_matches_literal_formula_off_grid(builder, literal):
    # edge points included: H(0) = 1
    x = np.array([-8.0, -7.0, -6.0, -5.0, -2.0, 0.0, 2.0, 5.0, 6.0, 7.0, 8.0, 10.0, -4.999, 4.999])
    kind = {P.build_single_rectangular: P.single_rectangular_spec,
            P.build_double_rectangular: P.double_rectangular_spec,
            P.build_triangular: P.triangular_spec}[builder]
    np.testing.assert_array_equal(kind(0.0).base(x), literal(x))


def test_spot_values(grid):
    single = P.build_single_rectangular(grid, 0.0, 0)
    assert at(single, 0.0) == -4.0
    assert at(single, 10.0) == 0.0
    double = P.build_double_rectangular(grid, 0.0, 0)
    assert (at(double, 7.0), at(double, -7.0), at(double, 0.0)) == (-3.0, 4.0, 0.0)
    tri = P.build_triangular(grid, 0.0, 0)
    assert at(tri, -5.0) == 0.0
    assert at(tri, 0.0) == -2.5
    assert at(tri, 6.0) == 0.0


def test_negate_base(grid):
    spec = P.single_rectangular_spec(0.0, negate_base=True)
    assert P.SampledPotential(grid, spec).base_values.max() == 4.0


def test_segment_validation():
    with pytest.raises(ConfigurationError):
        P.Segment(1.0, 1.0, 0.0)
    with pytest.raises(ConfigurationError):
        P.PotentialSpec("custom_piecewise", ((0, 2, 1.0), (1, 3, 1.0)))
    with pytest.raises(ConfigurationError):
        P.PotentialSpec("custom_piecewise", (), -0.1)
    with pytest.raises(ConfigurationError):
        P.PotentialSpec("nonsense")
    with pytest.raises(ConfigurationError):
        P.PotentialSpec(rng_seed=2**64)
    # touching segments are fine: half-open intervals
    P.PotentialSpec("custom_piecewise", ((0, 1, 1.0), (1, 2, 2.0)))


def test_custom_piecewise_series(grid):
    segs = [(-10 + 4 * i, -8 + 4 * i, -1.0) for i in range(5)]
    pot = P.SampledPotential(grid, P.PotentialSpec("custom_piecewise", segs))
    assert at(pot, -9.0) == -1.0 and at(pot, -7.0) == 0.0 and at(pot, 7.0) == -1.0


def test_noise_free_refresh_keeps_base(grid):
    pot = P.build_triangular(grid, 0.0, 3)
    for n in range(3):
        pot.refresh_noise(n)
        np.testing.assert_array_equal(pot.current_values, pot.base_values)


def test_refresh_is_deterministic(grid):
    a = P.build_single_rectangular(grid, 1.0, 42).refresh_noise(17).current_values.copy()
    b = P.refresh_noise(P.build_single_rectangular(grid, 1.0, 42), 17).current_values
    assert a.tobytes() == b.tobytes()


def test_refresh_order_independent(grid):
    pot = P.build_single_rectangular(grid, 1.0, 9)
    pot.refresh_noise(5)
    direct = pot.current_values.copy()
    pot.refresh_noise(1)
    pot.refresh_noise(5)
    np.testing.assert_array_equal(pot.current_values, direct)


def test_steps_and_seeds_differ(grid):
    n = grid.n_points
    r1 = P.noise_realization(3, 1, n)
    r2 = P.noise_realization(3, 2, n)
    r3 = P.noise_realization(4, 1, n)
    assert not np.array_equal(r1, r2) and not np.array_equal(r1, r3)
    assert abs(r1.mean()) < 0.05


@given(st.integers(0, 2**64 - 1), st.integers(0, 10**6), st.floats(0, 3))
def test_noise_bound(seed, step, alpha):
    from nlse_tunnel.grid import make_grid

    g = make_grid(256, -20.0, 40.0)
    pot = P.SampledPotential(g, P.triangular_spec(alpha, seed)).refresh_noise(step)
    assert np.max(np.abs(pot.current_values - pot.base_values)) <= alpha
    assert pot.current_values.dtype == np.float64


def test_noise_statistics():
    r = np.stack([P.noise_realization(11, s, 64) for s in range(10_000)])
    mean, var = r.mean(axis=0), r.var(axis=0)
    assert np.all(np.abs(mean) <= 0.05)
    assert np.all(np.abs(var - 1 / 3) <= 0.05)
    assert r.min() >= -1 and r.max() <= 1


def test_base_csv_rows(grid):
    rows = P.base_csv_rows(P.build_single_rectangular(grid, 0.0, 0))
    assert len(rows) == grid.n_points and rows[0] == (-50.0, 0.0)
