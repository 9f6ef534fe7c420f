import math

import numpy as np
import pytest

from matchlim import (
    DegreeDistribution,
    InvalidParameterError,
    gamma_ugw,
    historical_records,
    population_dynamics_z,
    population_dynamics_zero,
)


class TestTemperatureZ:
    def test_two_regular_scalar_fixed_point(self):
        # offspring law Dirac(1): y = z^2/(z^2+x) has the golden-ratio fixed
        # point at z=1
        d = DegreeDistribution.dirac(2)
        res = population_dynamics_z(d, 1.0, pop_size=50_000, sweeps=100, seed=1)
        expect = (math.sqrt(5) - 1) / 2
        assert abs(res.sweep_means[-1] - expect) < 1e-3

    def test_huge_z_all_exposed(self):
        d = DegreeDistribution.poisson(2.0)
        res = population_dynamics_z(d, 1e3, pop_size=10_000, sweeps=20, seed=2)
        assert res.root_mean > 0.999

    def test_matches_path_tree_estimator(self):
        from matchlim import RootedGraph, build_path_tree, gen_erdos_renyi, solve_rep_z

        d = DegreeDistribution.poisson(2.0)
        res = population_dynamics_z(d, 0.5, pop_size=100_000, sweeps=100, seed=3)
        g = gen_erdos_renyi(100_000, 2.0, seed=4)
        rng = np.random.default_rng(99)
        roots = rng.choice(g.n, size=4000, replace=False)
        vals = []
        for r in roots:
            pt = build_path_tree(RootedGraph(g, int(r)), 14)
            vals.append(solve_rep_z(pt, 0.5))
        assert abs(res.root_mean - float(np.mean(vals))) < 1e-2

    def test_deterministic(self):
        d = DegreeDistribution.poisson(2.0)
        a = population_dynamics_z(d, 0.7, pop_size=5_000, sweeps=10, seed=6)
        b = population_dynamics_z(d, 0.7, pop_size=5_000, sweeps=10, seed=6)
        assert a.root_mean == b.root_mean
        assert np.array_equal(a.population, b.population)

    def test_validates_parameters(self):
        d = DegreeDistribution.poisson(2.0)
        with pytest.raises(InvalidParameterError):
            population_dynamics_z(d, 0.0)
        with pytest.raises(InvalidParameterError):
            population_dynamics_z(d, 1.0, pop_size=10)


class TestZeroTemperature:
    def test_all_zero_fixed_population(self):
        d = DegreeDistribution.dirac(2)
        res = population_dynamics_zero(d, p_init=0.0, pop_size=5_000, sweeps=10, seed=0)
        assert res.root_mean == 0.0
        assert res.mass_positive == 0.0

    def test_poisson2_root_mean(self):
        d = DegreeDistribution.poisson(2.0)
        res = population_dynamics_zero(d, pop_size=100_000, seed=7)
        target = 1 - 2 * gamma_ugw(d)
        assert abs(res.root_mean - target) < 5e-3

    def test_mass_identity(self):
        import warnings

        for spec in ("poisson 2", "poisson 3"):
            d = DegreeDistribution.parse(spec)
            res = population_dynamics_zero(d, pop_size=100_000, seed=8)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                rec = historical_records(d).last
            assert abs(res.mass_positive - rec) < 1e-2

    def test_sweep_means_nonincreasing(self):
        for spec, seed in (("poisson 2", 9), ("poisson 3", 10), ("dirac 3", 11)):
            d = DegreeDistribution.parse(spec)
            res = population_dynamics_zero(d, pop_size=50_000, seed=seed)
            means = np.array(res.sweep_means)
            # allow Monte Carlo noise: three standard errors of a Bernoulli mean
            slack = 3 * 0.5 / math.sqrt(50_000)
            assert (np.diff(means) <= slack).all()

    def test_deterministic(self):
        d = DegreeDistribution.poisson(2.0)
        a = population_dynamics_zero(d, pop_size=5_000, sweeps=10, seed=12)
        b = population_dynamics_zero(d, pop_size=5_000, sweeps=10, seed=12)
        assert a.root_mean == b.root_mean

    def test_p_init_validated(self):
        d = DegreeDistribution.poisson(2.0)
        with pytest.raises(InvalidParameterError):
            population_dynamics_zero(d, p_init=1.5)
