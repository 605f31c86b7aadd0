import math

import numpy as np
import pytest
from scipy.integrate import quad

from cyrisk.errors import DegenerateCurve, DegenerateDistribution, InputError
from cyrisk.success import (
    LogisticParams,
    SuccessDistribution,
    pert_from_maturity,
    pert_pdf,
    solve_asymptotes,
    success_probability,
)


def oracle_solve(growth_rate, midpoint, upper, lower):
    """Independent solution of the endpoint system via a dense linear solve."""
    def g(x):
        return 1.0 / (1.0 + math.exp(-growth_rate * (x - midpoint)))

    # unknowns (A, K): A (1 - g) + K g = value at each endpoint
    matrix = np.array([[1.0 - g(0.0), g(0.0)], [1.0 - g(10.0), g(10.0)]])
    a, k = np.linalg.solve(matrix, np.array([upper, lower]))
    return float(a), float(k)


class TestSolveAsymptotes:
    def test_hand_solved_example(self):
        params = solve_asymptotes(-1.0, 5.0, 0.97, 0.03)
        assert params.A == pytest.approx(0.023623, abs=1e-6)
        assert params.K == pytest.approx(0.976377, abs=1e-6)

    def test_endpoints_by_construction(self):
        params = solve_asymptotes(-1.0, 5.0, 0.97, 0.03)
        assert params.curve(0.0) == pytest.approx(0.97, abs=1e-12)
        assert params.curve(10.0) == pytest.approx(0.03, abs=1e-12)

    def test_matches_linear_solve_oracle(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            growth = -float(rng.uniform(0.25, 4.0))
            mid = float(rng.uniform(0.0, 10.0))
            low = float(rng.uniform(0.001, 0.4))
            up = float(rng.uniform(low + 0.05, 0.999))
            params = solve_asymptotes(growth, mid, up, low)
            a, k = oracle_solve(growth, mid, up, low)
            assert params.A == pytest.approx(a, abs=1e-10)
            assert params.K == pytest.approx(k, abs=1e-10)

    def test_symmetric_midpoint_value(self):
        # for x0 centered in the scale the midpoint value is exactly (U + L) / 2
        params = solve_asymptotes(-1.0, 5.0, 0.97, 0.03)
        assert success_probability(params, 5.0) == pytest.approx(0.5, abs=1e-6)

    def test_flat_curve_rejected(self):
        with pytest.raises(DegenerateCurve):
            solve_asymptotes(-1e-16, 5.0, 0.97, 0.03)

    def test_positive_growth_rejected(self):
        with pytest.raises(InputError):
            solve_asymptotes(1.0, 5.0, 0.97, 0.03)

    def test_bad_levels_rejected(self):
        with pytest.raises(InputError):
            solve_asymptotes(-1.0, 5.0, 0.03, 0.97)

    def test_inconsistent_asymptotes_rejected(self):
        with pytest.raises(InputError):
            LogisticParams(B=-1.0, x0=5.0, U=0.97, L=0.03, A=0.1, K=0.9)


class TestSuccessProbability:
    def test_upper_boundary(self):
        params = solve_asymptotes(-2.0, 5.0, 0.97, 0.03)
        assert success_probability(params, 0.0, w=1.0) == pytest.approx(0.97, abs=1e-12)

    def test_lower_boundary(self):
        params = solve_asymptotes(-2.0, 5.0, 0.97, 0.03)
        assert success_probability(params, 10.0, w=1.0) == pytest.approx(0.03, abs=1e-12)

    def test_weight_scales_linearly(self):
        params = solve_asymptotes(-1.0, 5.0, 0.97, 0.03)
        # midpoint value is 0.5, so w=0.8 gives 0.40
        assert success_probability(params, 5.0, w=0.8) == pytest.approx(0.40, abs=1e-9)

    def test_reference_midpoint_two_decimals(self):
        params = solve_asymptotes(-1.0, 4.3, 0.97, 0.03)
        assert success_probability(params, 4.3) == pytest.approx(0.50, abs=0.005)

    def test_strictly_decreasing_on_grid(self):
        params = solve_asymptotes(-1.5, 4.0, 0.97, 0.03)
        xs = np.linspace(0.0, 10.0, 1000)
        values = [success_probability(params, float(x)) for x in xs]
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_increasing_in_midpoint_at_fixed_x(self):
        # larger midpoints shift the curve right, raising interior values
        previous = None
        for mid in (1.0, 3.0, 5.0, 7.0, 9.0):
            params = solve_asymptotes(-1.0, mid, 0.97, 0.03)
            value = success_probability(params, 5.0)
            if previous is not None:
                assert value > previous
            previous = value

    def test_out_of_range_inputs_rejected(self):
        params = solve_asymptotes(-1.0, 5.0, 0.97, 0.03)
        with pytest.raises(InputError):
            success_probability(params, 10.5)
        with pytest.raises(InputError):
            success_probability(params, 5.0, w=0.0)
        with pytest.raises(InputError):
            success_probability(params, 5.0, w=1.5)


class TestPertFromMaturity:
    def test_reference_band_at_the_curve_midpoint(self):
        params = solve_asymptotes(-1.0, 4.3, 0.97, 0.03)
        dist = pert_from_maturity(params, 4.3, w=1.0, q=1.0)
        # frozen from the verified curve evaluation at x = 3.3, 4.3, 5.3
        assert dist.p_m == pytest.approx(0.283917, abs=1e-5)
        assert dist.p_star == pytest.approx(0.504805, abs=1e-5)
        assert dist.p_M == pytest.approx(0.725692, abs=1e-5)

    def test_symmetric_band_gives_equal_shapes(self):
        params = solve_asymptotes(-1.0, 4.3, 0.97, 0.03)
        dist = pert_from_maturity(params, 4.3, w=1.0, q=1.0)
        assert dist.alpha == pytest.approx(3.0, abs=1e-9)
        assert dist.beta == pytest.approx(3.0, abs=1e-9)

    def test_canonical_shapes_from_triple(self):
        dist = SuccessDistribution.from_triple(0.28, 0.50, 0.72)
        assert dist.alpha == pytest.approx(3.0)
        assert dist.beta == pytest.approx(3.0)

    def test_upper_clamp(self):
        params = solve_asymptotes(-1.0, 5.0, 0.97, 0.03)
        dist = pert_from_maturity(params, 9.5, w=0.9, q=1.0)
        assert dist.p_m == pytest.approx(0.9 * 0.03, abs=1e-12)

    def test_lower_clamp(self):
        params = solve_asymptotes(-1.0, 5.0, 0.97, 0.03)
        dist = pert_from_maturity(params, 0.5, w=1.0, q=1.0)
        assert dist.p_M == pytest.approx(0.97, abs=1e-12)

    def test_ordering_holds_across_the_scale(self):
        params = solve_asymptotes(-2.0, 6.0, 0.97, 0.03)
        for x in np.linspace(0.0, 10.0, 101):
            for q in (0.25, 1.0, 3.0):
                dist = pert_from_maturity(params, float(x), w=0.8, q=q)
                assert dist.p_m <= dist.p_star <= dist.p_M

    def test_invalid_spread_rejected(self):
        params = solve_asymptotes(-1.0, 5.0, 0.97, 0.03)
        with pytest.raises(InputError):
            pert_from_maturity(params, 5.0, q=0.0)


class TestPertPdf:
    def test_zero_outside_support(self):
        dist = SuccessDistribution.from_triple(0.28, 0.50, 0.72)
        assert pert_pdf(dist, 0.1) == 0.0
        assert pert_pdf(dist, 0.9) == 0.0

    def test_symmetric_band_peaks_at_mode(self):
        dist = SuccessDistribution.from_triple(0.28, 0.50, 0.72)
        at_mode = pert_pdf(dist, 0.50)
        for p in (0.30, 0.40, 0.60, 0.70):
            assert pert_pdf(dist, p) < at_mode

    @pytest.mark.parametrize(
        "triple",
        [(0.28, 0.50, 0.72), (0.08, 0.17, 0.34), (0.79, 0.90, 0.95), (0.11, 0.23, 0.43)],
    )
    def test_normalizes_to_one(self, triple):
        dist = SuccessDistribution.from_triple(*triple)
        total, _ = quad(lambda p: pert_pdf(dist, p), dist.p_m, dist.p_M,
                        epsabs=1e-12, epsrel=1e-12)
        assert total == pytest.approx(1.0, abs=1e-9)

    @pytest.mark.parametrize(
        "triple",
        [(0.28, 0.50, 0.72), (0.08, 0.17, 0.34), (0.79, 0.90, 0.95)],
    )
    def test_quadrature_mean_matches_closed_form(self, triple):
        dist = SuccessDistribution.from_triple(*triple)
        mean, _ = quad(lambda p: p * pert_pdf(dist, p), dist.p_m, dist.p_M,
                       epsabs=1e-12, epsrel=1e-12)
        assert mean == pytest.approx(dist.mean, abs=1e-9)

    def test_point_mass_has_no_density(self):
        dist = SuccessDistribution.point_mass(0.4)
        assert dist.is_point_mass
        with pytest.raises(DegenerateDistribution):
            pert_pdf(dist, 0.4)

    def test_near_degenerate_triple_collapses_to_point_mass(self):
        dist = SuccessDistribution.from_triple(0.5, 0.5, 0.5 + 1e-13)
        assert dist.is_point_mass
        assert dist.p_star == pytest.approx(0.5)

    def test_invalid_triples_rejected(self):
        with pytest.raises(InputError):
            SuccessDistribution.from_triple(0.5, 0.4, 0.7)
        with pytest.raises(InputError):
            SuccessDistribution.from_triple(0.0, 0.4, 0.7)
