import math

import numpy as np
import pytest

from matchlim import (
    DegreeDistribution,
    InvalidParameterError,
    cuckoo_matched_fraction,
    cuckoo_threshold,
    eval_F,
    eval_F_bipartite,
    eval_g,
    gamma_ugw,
    gamma_uhgw,
    historical_records,
    stationarity_residual,
)


def dist_from_terms(terms):
    """pmf from {degree: probability}."""
    pmf = np.zeros(max(terms) + 1)
    for k, p in terms.items():
        pmf[k] = p
    return DegreeDistribution.from_pmf(pmf)


MIX_3_15 = dist_from_terms({3: 0.75, 15: 0.25})
MIX_FIG2 = dist_from_terms({3: 50 / 101, 20: 50 / 101, 700: 1 / 101})
TEN_DISTS = [
    DegreeDistribution.dirac(1),
    DegreeDistribution.dirac(2),
    DegreeDistribution.dirac(3),
    DegreeDistribution.dirac(5),
    DegreeDistribution.poisson(1.0),
    DegreeDistribution.poisson(2.0),
    DegreeDistribution.poisson(math.e),
    DegreeDistribution.poisson(3.0),
    MIX_3_15,
    MIX_FIG2,
]


class TestDegreeDistribution:
    def test_parse_roundtrip(self):
        assert DegreeDistribution.parse("dirac 3").pmf[3] == 1.0
        assert DegreeDistribution.parse("poisson 2").mean == pytest.approx(2.0)
        d = DegreeDistribution.parse("pmf 0.5 0 0.5")
        assert d.pmf.tolist() == [0.5, 0.0, 0.5]
        with pytest.raises(InvalidParameterError):
            DegreeDistribution.parse("weird 1")
        with pytest.raises(InvalidParameterError):
            DegreeDistribution.parse("pmf 0.5 0.2")

    def test_poisson_tail_truncation(self):
        d = DegreeDistribution.poisson(3.0)
        assert abs(d.pmf.sum() - 1.0) < 1e-9
        assert d.pmf[-1] < 1e-12

    def test_size_biased_examples(self):
        assert DegreeDistribution.dirac(3).size_biased().pmf[2] == 1.0
        p = DegreeDistribution.poisson(2.0).size_biased()
        assert p.kind == "poisson" and p.param == 2.0
        half = DegreeDistribution.from_pmf([0.5, 0.0, 0.5])
        assert half.size_biased().pmf.tolist() == pytest.approx([0.0, 1.0])

    def test_size_biased_generating_identity(self):
        ts = np.linspace(0, 1, 21)
        for d in TEN_DISTS:
            hat = d.size_biased()
            assert np.abs(hat.phi(ts) * d.mean - d.phi_prime(ts)).max() < 1e-12

    def test_size_biased_requires_positive_mean(self):
        with pytest.raises(InvalidParameterError):
            DegreeDistribution.dirac(0).size_biased()


class TestLimitFormulas:
    def test_F_vanishes_for_matched_families(self):
        ts = np.linspace(0, 1, 33)
        for k in (1, 2):
            assert np.abs(eval_F(DegreeDistribution.dirac(k), ts)).max() < 1e-12

    def test_F_at_zero_equals_mass_at_zero(self):
        for d in TEN_DISTS + [DegreeDistribution.from_pmf([0.3, 0.3, 0.4])]:
            assert float(eval_F(d, 0.0)) == pytest.approx(float(d.pmf[0]), abs=1e-12)

    def test_F_stationary_at_poisson_fixed_point(self):
        # smallest root of t = exp(-2 exp(-2t))
        from scipy.optimize import bisect

        t_c = bisect(lambda t: t - math.exp(-2 * math.exp(-2 * t)), 0.0, 1.0, xtol=1e-14)
        d = DegreeDistribution.poisson(2.0)
        h = 1e-6
        deriv = (float(eval_F(d, t_c + h)) - float(eval_F(d, t_c - h))) / (2 * h)
        assert abs(deriv) < 1e-8
        assert abs(float(stationarity_residual(d, t_c))) < 1e-9

    def test_gamma_named_values(self):
        assert gamma_ugw(DegreeDistribution.dirac(2)) == pytest.approx(0.5)
        assert gamma_ugw(DegreeDistribution.dirac(1)) == pytest.approx(0.5)
        from scipy.optimize import bisect

        t_c = bisect(lambda t: t - math.exp(-2 * math.exp(-2 * t)), 0.0, 1.0, xtol=1e-14)
        expect = 1 - (t_c + math.exp(-2 * t_c) + 2 * t_c * math.exp(-2 * t_c)) / 2
        assert gamma_ugw(DegreeDistribution.poisson(2.0)) == pytest.approx(expect, abs=1e-9)
        assert 0.39 < gamma_ugw(DegreeDistribution.poisson(2.0)) < 0.40

    def test_gamma_range(self):
        for d in TEN_DISTS:
            assert 0.0 <= gamma_ugw(d) <= 0.5 + 1e-12

    def test_gamma_tail_truncation_continuity(self):
        base = gamma_ugw(DegreeDistribution.poisson(3.0))
        diffs = []
        for extra in (0, 10, 20):
            k = 30 + extra
            from scipy import stats

            pmf = stats.poisson.pmf(np.arange(k + 1), 3.0)
            d = DegreeDistribution.from_pmf(pmf / pmf.sum())
            diffs.append(abs(gamma_ugw(d) - base))
        assert diffs[-1] < 1e-10 and diffs[-1] <= diffs[0] + 1e-12

    def test_g_identity(self):
        ts = np.linspace(0.0, 1.0, 1000)
        for d in TEN_DISTS:
            lhs = np.asarray(eval_g(d, 1.0 - ts), dtype=float)
            rhs = (1.0 - np.asarray(eval_F(d, ts), dtype=float)) / 2.0
            assert np.abs(lhs - rhs).max() < 1e-12

    def test_g_minimum_equals_gamma(self):
        for d in TEN_DISTS:
            with _nowarn():
                recs = historical_records(d)
            xs = np.concatenate([np.linspace(0, 1, 2001), 1.0 - np.array(recs.locations)])
            gmin = float(np.min(np.asarray(eval_g(d, xs), dtype=float)))
            assert abs(gmin - gamma_ugw(d)) < 1e-9


def _nowarn():
    import warnings

    class _C:
        def __enter__(self):
            self._c = warnings.catch_warnings()
            self._c.__enter__()
            warnings.simplefilter("ignore")
            return self

        def __exit__(self, *a):
            return self._c.__exit__(*a)

    return _C()


class TestHistoricalRecords:
    def test_poisson_single_record(self):
        for c in (2.0, math.e, 3.0):
            with _nowarn():
                recs = historical_records(DegreeDistribution.poisson(c))
            assert len(recs) == 1

    def test_two_regular_plateau(self):
        recs = historical_records(DegreeDistribution.dirac(2))
        assert recs.locations == [0.0]

    def test_multi_record_mixtures(self):
        with _nowarn():
            assert len(historical_records(MIX_3_15)) >= 2
            assert len(historical_records(MIX_FIG2)) >= 2

    def test_records_satisfy_fixed_point_and_increase(self):
        for d in TEN_DISTS:
            with _nowarn():
                recs = historical_records(d)
            hat = d.size_biased()
            for x in recs.locations:
                resid = hat.phi(1 - hat.phi(1 - x)) - x
                assert abs(float(resid)) < 1e-9
            fvals = recs.f_values
            assert all(a < b + 1e-12 for a, b in zip(fvals, fvals[1:]))
            assert all(a < b for a, b in zip(recs.locations, recs.locations[1:]))

    def test_degenerate_tie_warns(self):
        with pytest.warns(UserWarning, match="ties the running maximum"):
            historical_records(DegreeDistribution.poisson(3.0))


class TestBipartite:
    def test_reduces_to_single_type(self):
        ts = np.linspace(0, 1, 17)
        for d in (DegreeDistribution.poisson(2.0), MIX_3_15):
            fa, fb = eval_F_bipartite(d, d, ts)
            f = np.asarray(eval_F(d, ts), dtype=float)
            assert np.abs(np.asarray(fa) - f).max() < 1e-12
            assert np.abs(np.asarray(fb) - f).max() < 1e-12

    def test_dirac2_pair_zero(self):
        d = DegreeDistribution.dirac(2)
        fa, fb = eval_F_bipartite(d, d, np.linspace(0, 1, 9))
        assert np.abs(np.asarray(fa)).max() < 1e-12

    def test_cuckoo_instance_closed_form(self):
        # items of degree exactly k=3, slots Poisson(k*alpha)
        k, alpha = 3, 0.9
        da = DegreeDistribution.dirac(k)
        db = DegreeDistribution.poisson(k * alpha)
        xs = np.linspace(0.01, 0.99, 23)
        fa, _ = eval_F_bipartite(da, db, xs)
        s = 1 - np.exp(-k * alpha * xs)
        expect = s**k - (1 / alpha) * (1 - np.exp(-k * alpha * xs) - k * alpha * xs * np.exp(-k * alpha * xs))
        assert np.abs(np.asarray(fa) - expect).max() < 1e-10

    def test_gamma_uhgw_matches_single_type(self):
        for d in (DegreeDistribution.poisson(2.0), DegreeDistribution.dirac(3)):
            assert gamma_uhgw(d, d) == pytest.approx(gamma_ugw(d), abs=1e-9)
        d1 = DegreeDistribution.dirac(1)
        assert gamma_uhgw(d1, d1) == pytest.approx(0.5)

    def test_lambda_symmetry(self):
        pairs = [
            (DegreeDistribution.dirac(3), DegreeDistribution.poisson(2.7)),
            (DegreeDistribution.poisson(2.0), DegreeDistribution.poisson(3.0)),
            (MIX_3_15, DegreeDistribution.poisson(2.0)),
        ]
        for da, db in pairs:
            lam = db.mean / (da.mean + db.mean)
            ts = np.linspace(0, 1, 4001)
            fa, _ = eval_F_bipartite(da, db, ts)
            _, fb = eval_F_bipartite(da, db, ts)
            max_fa = float(np.max(np.asarray(fa)))
            max_fb = float(np.max(np.asarray(fb)))
            assert abs(lam * (1 - max_fa) - (1 - lam) * (1 - max_fb)) < 1e-6
            # refined check through the gamma formulas
            gamma_uhgw(da, db)  # raises internally if the forms disagree > 1e-9

    def test_conjugacy_at_records(self):
        da = DegreeDistribution.dirac(3)
        db = DegreeDistribution.poisson(2.7)
        lam = db.mean / (da.mean + db.mean)
        with _nowarn():
            recs = historical_records(da, db)
        # conjugate point: y = phi-hat-b(1-x), the b-side partner of x
        for x in recs.locations:
            y = float(db.size_biased().phi(1.0 - x))
            fa = float(eval_F_bipartite(da, db, x)[0])
            fb = float(eval_F_bipartite(da, db, y)[1])
            assert abs(lam * (1 - fa) - (1 - lam) * (1 - fb)) < 1e-9


class TestCuckoo:
    def test_threshold_values(self):
        _, a3 = cuckoo_threshold(3)
        assert a3 == pytest.approx(0.9179, abs=5e-5)
        _, a4 = cuckoo_threshold(4)
        assert a4 == pytest.approx(0.977, abs=1e-3)

    def test_two_root_finders_agree(self):
        for k in (3, 4, 5):
            _, a_b = cuckoo_threshold(k, method="bisect")
            _, a_s = cuckoo_threshold(k, method="secant")
            assert abs(a_b - a_s) < 1e-6

    def test_alpha_c_increasing_in_k(self):
        vals = [cuckoo_threshold(k)[1] for k in range(3, 9)]
        assert all(a < b for a, b in zip(vals, vals[1:]))
        assert all(v < 1 for v in vals)

    def test_matched_fraction(self):
        assert cuckoo_matched_fraction(3, 0.5) == 1.0
        _, a3 = cuckoo_threshold(3)
        assert cuckoo_matched_fraction(3, a3 - 1e-6) == 1.0
        above = cuckoo_matched_fraction(3, 0.95)
        assert 0.9 < above < 1.0

    def test_rejects_small_k(self):
        with pytest.raises(InvalidParameterError):
            cuckoo_threshold(2)
        with pytest.raises(InvalidParameterError):
            cuckoo_matched_fraction(2, 0.5)
