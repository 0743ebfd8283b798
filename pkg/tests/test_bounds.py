import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entcorr.bounds import (
    LN2,
    beta_deform,
    bound_curve,
    g_d_numeric,
    renyi_threshold,
    spectrum_at_f,
    threshold,
    u,
    v,
    w_pm,
    xi_ef,
    zeta_ef,
    zeta_mi_of_xi,
)
from entcorr.correlations import c_max, f_value
from entcorr.measures import s22_ef
from entcorr.qcore import DomainError, majorizes, random_spectrum, worker_rng

RNG = worker_rng(31337)


def binary_entropy_at_concurrence(y):
    # independent route: v(y) is the natural-log binary entropy at
    # a = (1 + sqrt(1 - y^2)) / 2
    a = (1.0 + math.sqrt(1.0 - y * y)) / 2.0
    out = -a * math.log(a)
    if a < 1.0:
        out -= (1.0 - a) * math.log(1.0 - a)
    return out


class TestKernels:
    def test_v_endpoints(self):
        assert v(0.0) == 0.0
        assert v(1.0) == LN2

    def test_v_half(self):
        assert abs(v(0.5) - 0.24577536666847116) < 1e-15
        assert abs(v(0.5) - binary_entropy_at_concurrence(0.5)) < 1e-15

    def test_w_pm_sum(self):
        for y in np.linspace(0.0, 1.0, 11):
            assert abs(w_pm(y, +1) + w_pm(y, -1) - v(y)) < 1e-14

    def test_v_increasing(self):
        ys = np.linspace(0.0, 1.0, 1001)
        assert np.all(np.diff(v(ys)) > 0)

    def test_domain_errors(self):
        for bad in (-0.1, 1.1):
            with pytest.raises(DomainError):
                v(bad)
        with pytest.raises(DomainError):
            u(0.76)

    @given(st.floats(0.0, 1.0))
    def test_v_matches_binary_entropy(self, y):
        assert abs(v(y) - binary_entropy_at_concurrence(y)) < 1e-13


class TestU:
    def test_endpoints(self):
        assert u(0.0) == LN2
        assert u(0.7) == 0.0
        assert u(0.75) == 0.0

    def test_middle_branch_value(self):
        assert abs(u(0.3) - v(0.7)) < 1e-15
        assert abs(u(0.3) - 0.41024429307387456) < 1e-15

    def test_continuity_at_breaks(self):
        eps = 1e-13
        assert abs(u(0.5 - eps) - u(0.5 + eps)) < 1e-12
        assert abs(u(2.0 / 3.0 - eps) - u(2.0 / 3.0 + eps)) < 1e-12

    def test_nonincreasing(self):
        ys = np.linspace(0.0, 0.75, 1001)
        assert np.all(np.diff(u(ys)) <= 1e-15)


class TestXiZeta:
    def test_endpoints(self):
        assert abs(xi_ef("bures", 0.0) - LN2) < 1e-15
        assert abs(xi_ef("hellinger", 0.0) - LN2) < 1e-15
        assert xi_ef("bures", 1.0) == 0.0
        assert xi_ef("hellinger", math.sqrt(1.5)) == 0.0

    def test_hellinger_at_one(self):
        assert abs(xi_ef("hellinger", 1.0) - v(0.5)) < 1e-15

    def test_zeta_is_bures_xi(self):
        xs = np.linspace(0.0, 1.0, 57)
        assert np.array_equal(zeta_ef("hellinger", xs), xi_ef("bures", xs))

    def test_zeta_mi_rescales(self):
        fn = lambda t: t * 0.5
        assert zeta_mi_of_xi(fn, 0.3) == pytest.approx(0.3)

    def test_nonincreasing_grids(self):
        for kind in ("bures", "hellinger"):
            xs = np.linspace(0.0, c_max(kind, 4), 1000)
            assert np.all(np.diff(xi_ef(kind, xs)) <= 1e-15)

    def test_domain(self):
        with pytest.raises(DomainError):
            xi_ef("hellinger", 1.3)
        with pytest.raises(DomainError):
            zeta_ef("bures", 0.5)


class TestThresholds:
    def test_values(self):
        assert abs(threshold("hellinger") - math.sqrt(4.0 / 3.0)) < 1e-15
        assert abs(threshold("bures") - math.sqrt(2.0 - math.sqrt(4.0 / 3.0))) < 1e-15

    def test_below_capacity(self):
        for kind in ("bures", "hellinger"):
            assert threshold(kind) < c_max(kind, 4)

    def test_zero_beyond_threshold(self):
        for kind in ("bures", "hellinger"):
            xs = np.linspace(threshold(kind), c_max(kind, 4), 101)
            assert np.all(np.asarray(xi_ef(kind, xs)) < 1e-12)

    def test_renyi_threshold(self):
        # ln(d1 d2) - alpha / (2 d (d-1)) with d = d1 d2
        assert abs(renyi_threshold(2, 2, 1.0) - (math.log(4) - 1.0 / 24.0)) < 1e-15
        assert abs(renyi_threshold(2, 2, 1e-9) - math.log(4)) < 1e-9
        for d1, d2 in ((2, 2), (2, 3), (3, 4)):
            assert renyi_threshold(d1, d2, 1.0) < math.log(d1 * d2)
        with pytest.raises(DomainError):
            renyi_threshold(2, 2, 1.5)
        with pytest.raises(DomainError):
            renyi_threshold(2, 2, 0.0)


class TestBetaDeform:
    def test_identity_at_one(self):
        p = np.array([0.5, 0.3, 0.2])
        assert np.allclose(beta_deform(p, 1.0), p)

    def test_power_branch_hand_value(self):
        q = beta_deform(np.array([0.7, 0.3]), 2.0)
        assert np.allclose(q, [49.0 / 58.0, 9.0 / 58.0])

    def test_large_beta_reaches_point_mass(self):
        q = beta_deform(np.array([0.5, 0.5]), 1e6)
        assert q.size == 1 and q[0] == 1.0

    def test_tie_branch_endpoint(self):
        # uniform-4 has eta* = 3/4; at beta = 1 + eta* the vector collapses
        q = beta_deform(np.full(4, 0.25), 1.75)
        assert q.size == 1 and q[0] == 1.0

    def test_rejects_beta_below_one(self):
        with pytest.raises(DomainError):
            beta_deform(np.array([0.6, 0.4]), 0.5)

    def test_majorization_random(self):
        rng = worker_rng(9)
        for _ in range(10_000):
            size = int(rng.integers(1, 6))
            p = random_spectrum(size, rng)
            if rng.uniform() < 0.3:  # force top ties regularly
                k = int(rng.integers(2, size + 1)) if size > 1 else 1
                p[:k] = p[0]
                p = np.sort(p)[::-1] / p.sum()
            beta = 1.0 + rng.exponential(2.0)
            q = beta_deform(p, beta)
            assert majorizes(q, p)

    def test_continuity_in_beta(self):
        # no jump larger than 10 * dbeta * Lipschitz-estimate on a fine grid
        rng = worker_rng(10)
        betas = np.linspace(1.0, 4.0, 601)
        dbeta = betas[1] - betas[0]
        for p in (np.full(4, 0.25), np.array([0.4, 0.4, 0.1, 0.1]), random_spectrum(4, rng)):
            for kind in ("bures", "hellinger", "mutual_information"):
                vals = np.array([f_value(kind, beta_deform(p, b)) for b in betas])
                jumps = np.abs(np.diff(vals))
                lipschitz = jumps.max() / dbeta
                assert np.all(jumps <= 10.0 * dbeta * max(lipschitz, 1e-9) + 1e-12)


class TestSpectrumAtF:
    def test_reaches_any_target(self):
        for kind in ("bures", "hellinger", "mutual_information"):
            for x in np.linspace(0.0, c_max(kind, 4), 20):
                p = spectrum_at_f(kind, float(x))
                assert abs(f_value(kind, p) - x) < 1e-9

    def test_rejects_unreachable(self):
        with pytest.raises(DomainError):
            spectrum_at_f("bures", 1.5)


class TestG4:
    def test_zero_end(self):
        assert g_d_numeric("hellinger", 4, 0.0) == 0.0

    def test_capacity_end(self):
        assert abs(g_d_numeric("hellinger", 4, c_max("hellinger", 4)) - LN2) < 1e-12

    def test_matches_analytic_curve(self):
        for kind in ("bures", "hellinger"):
            xs = np.linspace(0.0, c_max(kind, 4), 20)
            diffs = [
                abs((LN2 - g_d_numeric(kind, 4, float(x))) - float(xi_ef(kind, x)))
                for x in xs
            ]
            assert max(diffs) <= 1e-3

    def test_never_exceeds_s22_of_feasible_point(self):
        rng = worker_rng(21)
        for _ in range(100):
            p = random_spectrum(4, rng)
            for kind in ("bures", "hellinger"):
                x = f_value(kind, p)
                assert g_d_numeric(kind, 4, x) <= s22_ef(p) + 1e-9

    def test_never_exceeds_s22_mutual_information(self):
        rng = worker_rng(22)
        for i in range(40):
            p = random_spectrum(4, rng)
            x = f_value("mutual_information", p)
            g = g_d_numeric("mutual_information", 4, x, rng=worker_rng(23, i))
            assert g <= s22_ef(p) + 1e-6

    def test_rejects_wrong_dimension(self):
        with pytest.raises(DomainError):
            g_d_numeric("hellinger", 9, 0.1)
        with pytest.raises(DomainError):
            g_d_numeric("hellinger", 4, 0.1, grid_resolution=50)


class TestBoundCurve:
    def test_distance_curves(self):
        for kind in ("bures", "hellinger"):
            curve = bound_curve(kind, grid=41)
            assert curve.xs[0] == 0.0
            assert abs(curve.bounds[0] - LN2) < 1e-15
            assert abs(curve.bounds[-1]) < 1e-12
            assert np.all(np.diff(curve.bounds) <= 1e-15)

    def test_mutual_information_curve(self):
        curve = bound_curve("mutual_information", grid=9, seed=3)
        assert abs(curve.bounds[0] - LN2) < 1e-9
        assert curve.bounds[-1] <= 1e-6
        assert np.all(np.diff(curve.bounds) <= 1e-15)
