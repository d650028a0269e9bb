import numpy as np
import pytest

from ordstat import (
    ArchimedeanGenerator,
    builtin_generator,
    check_log_concavity,
    survival_copula_eval,
    validate_generator,
)

INDEP = builtin_generator("independence")
EXP_TILT = builtin_generator("exp_tilt", 0.1)
POWER_TILT = builtin_generator("power_tilt", 7.0)
CLAYTON = builtin_generator("clayton", 1.0)
ALL_BUILTINS = [INDEP, EXP_TILT, POWER_TILT, CLAYTON]


class TestBuiltins:
    def test_independence_values(self):
        assert INDEP.psi(1.0) == pytest.approx(np.exp(-1.0), abs=1e-16)
        assert INDEP.phi(np.exp(-1.0)) == pytest.approx(1.0, abs=1e-14)

    def test_exp_tilt_inverse_formula(self):
        us = np.linspace(0.01, 1.0, 25)
        np.testing.assert_allclose(EXP_TILT.phi(us), np.log(1.0 - 0.1 * np.log(us)),
                                   rtol=1e-13)

    def test_power_tilt_inverse_formula(self):
        us = np.linspace(0.01, 1.0, 25)
        np.testing.assert_allclose(POWER_TILT.phi(us),
                                   (1.0 - np.log(us)) ** (1.0 / 7.0) - 1.0,
                                   rtol=1e-13)

    @pytest.mark.parametrize("gen", ALL_BUILTINS, ids=lambda g: g.name)
    def test_round_trip_on_unit_interval(self, gen):
        us = np.linspace(1e-6, 1.0, 200)
        np.testing.assert_allclose(gen.psi(gen.phi(us)), us, atol=1e-10)

    @pytest.mark.parametrize("gen", ALL_BUILTINS, ids=lambda g: g.name)
    def test_boundary_conditions(self, gen):
        assert gen.psi(0.0) == pytest.approx(1.0, abs=1e-15)
        assert gen.phi(1.0) == pytest.approx(0.0, abs=1e-15)
        assert gen.phi(1e-12) > gen.phi(1e-3)

    def test_alias_names(self):
        assert builtin_generator("example1", 0.1).name == "exp_tilt"
        assert builtin_generator("example2", 7.0).name == "power_tilt"

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            builtin_generator("exp_tilt", 1.5)
        with pytest.raises(ValueError):
            builtin_generator("power_tilt", -1.0)
        with pytest.raises(ValueError):
            builtin_generator("clayton")
        with pytest.raises(ValueError):
            builtin_generator("nosuch", 1.0)
        with pytest.raises(ValueError):
            builtin_generator("independence", 2.0)

    def test_analytic_psi_prime_matches_differences(self):
        for gen in ALL_BUILTINS:
            xs = np.linspace(0.05, float(gen.phi(1e-3)), 40)
            fd = (gen.psi(xs + 1e-6) - gen.psi(xs - 1e-6)) / 2e-6
            np.testing.assert_allclose(gen.psi_prime(xs), fd, rtol=1e-6, atol=1e-12)


class TestNumericFallbacks:
    def test_bisection_inverse_round_trip(self):
        g = ArchimedeanGenerator("custom", psi=lambda x: np.exp(-np.asarray(x)))
        us = np.linspace(1e-6, 1.0, 50)
        np.testing.assert_allclose(g.psi(g.phi(us)), us, atol=1e-10)

    def test_difference_derivative_fallback(self):
        g = ArchimedeanGenerator("custom", psi=lambda x: np.exp(-np.asarray(x)))
        xs = np.linspace(0.0, 4.0, 30)
        np.testing.assert_allclose(g.psi_prime(xs), -np.exp(-xs), rtol=1e-5)


class TestEvaluation:
    def test_independence_is_coordinate_product(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            u = rng.uniform(0.0, 1.0, rng.integers(1, 7))
            assert survival_copula_eval(INDEP, u) == pytest.approx(
                float(np.prod(u)), abs=1e-12)

    def test_known_product_value(self):
        assert survival_copula_eval(INDEP, [0.5, 0.5]) == pytest.approx(0.25, abs=1e-15)

    @pytest.mark.parametrize("gen", ALL_BUILTINS, ids=lambda g: g.name)
    def test_ones_zero_and_empty(self, gen):
        assert survival_copula_eval(gen, [1.0, 1.0, 1.0]) == pytest.approx(1.0, abs=1e-12)
        assert survival_copula_eval(gen, [0.4, 0.0, 0.9]) == 0.0
        assert survival_copula_eval(gen, []) == 1.0

    @pytest.mark.parametrize("gen", ALL_BUILTINS, ids=lambda g: g.name)
    def test_one_dimensional_margin(self, gen):
        us = np.linspace(1e-4, 1.0, 40)
        for u in us:
            assert survival_copula_eval(gen, [u]) == pytest.approx(float(u), abs=1e-12)

    @pytest.mark.parametrize("gen", ALL_BUILTINS, ids=lambda g: g.name)
    def test_monotone_in_each_coordinate(self, gen):
        rng = np.random.default_rng(12)
        for _ in range(40):
            u = rng.uniform(0.05, 0.95, 4)
            base = survival_copula_eval(gen, u)
            k = rng.integers(0, 4)
            bumped = u.copy()
            bumped[k] = min(1.0, bumped[k] + rng.uniform(0.0, 0.05))
            assert survival_copula_eval(gen, bumped) >= base - 1e-12

    def test_underflow_clamp_gives_exact_zero(self):
        assert survival_copula_eval(CLAYTON, [1e-310, 0.5]) == 0.0

    def test_dimension_guard(self):
        g = builtin_generator("clayton", 1.0, max_dimension=3)
        with pytest.raises(ValueError):
            survival_copula_eval(g, [0.5, 0.5, 0.5, 0.5])

    def test_component_range_guard(self):
        with pytest.raises(ValueError):
            survival_copula_eval(INDEP, [0.5, 1.2])
        with pytest.raises(ValueError):
            survival_copula_eval(INDEP, [-0.1])


class TestDiagnostics:
    def test_independence_passes_all_checks(self):
        d = validate_generator(INDEP, 4)
        assert d.is_decreasing and d.is_convex and d.is_log_concave
        assert d.d_monotone_up_to == 4

    def test_exp_tilt_passes_at_dimension_four(self):
        d = validate_generator(EXP_TILT, 4)
        assert d.is_decreasing and d.is_convex and d.is_log_concave
        assert d.d_monotone_up_to == 4
        assert d.margins["phi_order_2"] >= -1e-4

    def test_power_tilt_decreasing_convex(self):
        d = validate_generator(POWER_TILT, 4)
        assert d.is_decreasing and d.is_convex and d.is_log_concave

    def test_concave_generator_flagged(self):
        # decreasing but concave on its support: convexity must fail
        def psi(x):
            x = np.asarray(x, dtype=float)
            return np.clip(1.0 - x**2, 0.0, 1.0)

        g = ArchimedeanGenerator("concave-control", psi=psi)
        d = validate_generator(g, 2, grid=np.linspace(0.005, 0.9, 150))
        assert d.is_decreasing
        assert not d.is_convex

    def test_grid_size_guard(self):
        with pytest.raises(ValueError):
            validate_generator(INDEP, 3, grid=np.linspace(0.1, 1.0, 20))


class TestLogConcavity:
    def test_independence_log_concave(self):
        ok, margin = check_log_concavity(INDEP)
        assert ok and margin <= 1e-9

    def test_exp_tilt_log_concave(self):
        # log psi = (1 - e^x)/theta has second derivative -e^x/theta < 0
        ok, _ = check_log_concavity(EXP_TILT)
        assert ok

    def test_power_tilt_log_concave_above_one_only(self):
        ok, _ = check_log_concavity(builtin_generator("power_tilt", 7.0))
        assert ok
        ok, _ = check_log_concavity(builtin_generator("power_tilt", 0.5))
        assert not ok

    def test_clayton_not_log_concave(self):
        # log psi = -log(1+x)/theta is convex, the negative control
        ok, margin = check_log_concavity(CLAYTON)
        assert not ok
        assert margin > 1e-9
