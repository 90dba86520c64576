import cmath
import math

import numpy as np
from scipy.integrate import trapezoid
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cfverify.cf import (
    AnalyticCF,
    FrequencyGrid,
    LinearCombinationCF,
    MarginalSet,
    SampledCF,
    cf_from_spec,
    evaluate_cf,
    invariant_report,
    make_analytic_cf,
    moment_from_cf,
    sample_on_grid,
)
from cfverify.errors import ParameterError, UnsupportedOrderError

CATALOG = [
    AnalyticCF.cauchy(1.0, 1.0),
    AnalyticCF.cauchy(-2.0, 0.3),
    AnalyticCF.gaussian(1.0, 2.0),
    AnalyticCF.gaussian(-0.5, 0.1),
    AnalyticCF.uniform(-1.0, 3.0),
    AnalyticCF.degenerate(0.7),
]


class TestFrequencyGrid:
    def test_even_count_rounded_up(self):
        g = FrequencyGrid(50.0, 10000)
        assert g.n_points == 10001
        assert g.spacing == pytest.approx(0.01)

    def test_symmetric_with_zero(self):
        g = FrequencyGrid(3.0, 7)
        v = g.values
        assert v[g.center] == 0.0
        np.testing.assert_array_equal(v, -v[::-1])
        assert v[-1] == pytest.approx(3.0)

    @pytest.mark.parametrize("t_max,n", [(0.0, 11), (-1.0, 11), (1.0, 1)])
    def test_invalid(self, t_max, n):
        with pytest.raises(ParameterError):
            FrequencyGrid(t_max, n)


class TestAnalytic:
    def test_cauchy_at_zero(self):
        assert AnalyticCF.cauchy(1, 1)(0.0) == 1 + 0j

    def test_cauchy_at_one(self):
        assert AnalyticCF.cauchy(0, 1)(1.0) == pytest.approx(math.exp(-1))

    def test_gaussian_at_one(self):
        # exp(i mu t - var t^2 / 2) with mu = 1, var = 2, t = 1
        val = AnalyticCF.gaussian(1, 2)(1.0)
        assert val == pytest.approx(cmath.exp(1j - 1))
        assert val == pytest.approx(0.19877 + 0.30956j, abs=1e-5)

    def test_uniform_matches_quadrature(self):
        cf = AnalyticCF.uniform(-1.0, 3.0)
        x = np.linspace(-1.0, 3.0, 200001)
        for t in (0.3, 1.7, -2.2):
            ref = trapezoid(np.exp(1j * t * x), x) / 4.0
            assert cf(t) == pytest.approx(ref, abs=1e-8)

    @pytest.mark.parametrize(
        "kind,params",
        [
            ("cauchy", {"location": 0, "scale": 0}),
            ("cauchy", {"location": 0, "scale": -1}),
            ("gaussian", {"mean": 0, "variance": 0}),
            ("uniform", {"low": 1, "high": 1}),
            ("laplace", {"scale": 1}),
            ("cauchy", {"location": 0}),
        ],
    )
    def test_parameter_errors(self, kind, params):
        with pytest.raises(ParameterError):
            make_analytic_cf(kind, **params)

    def test_spec_roundtrip(self):
        spec = {"kind": "cauchy", "location": 1.0, "scale": 1.0}
        cf = cf_from_spec(spec)
        assert cf == AnalyticCF.cauchy(1.0, 1.0)
        assert cf.to_spec() == spec

    @pytest.mark.parametrize("cf", CATALOG, ids=lambda c: c.kind)
    def test_invariants(self, cf):
        t = np.linspace(-40, 40, 4001)
        v = cf(t)
        assert cf(0.0) == 1 + 0j
        assert np.all(np.abs(v) <= 1.0 + 1e-15)
        np.testing.assert_allclose(cf(-t), np.conj(v), rtol=0, atol=1e-15)


@given(t=st.floats(-1e3, 1e3, allow_nan=False), idx=st.integers(0, len(CATALOG) - 1))
def test_bounded_and_hermitian_property(t, idx):
    cf = CATALOG[idx]
    v = complex(cf(t))
    assert abs(v) <= 1.0 + 1e-15
    assert complex(cf(-t)) == pytest.approx(v.conjugate(), abs=1e-15)


class TestSampling:
    def test_degenerate_at_zero_is_all_ones(self):
        s = sample_on_grid(AnalyticCF.degenerate(0.0), FrequencyGrid(5.0, 101))
        np.testing.assert_array_equal(s.samples, np.ones(101))

    def test_cauchy_on_default_grid(self):
        g = FrequencyGrid(50.0, 10001)
        s = sample_on_grid(AnalyticCF.cauchy(0, 1), g)
        np.testing.assert_allclose(s.samples, np.exp(-np.abs(g.values)), rtol=1e-15, atol=0)

    def test_resample_identity(self):
        g = FrequencyGrid(10.0, 201)
        s = sample_on_grid(AnalyticCF.gaussian(0.4, 1.3), g)
        assert sample_on_grid(s, g) is s
        # the general path (via a different but equal grid object) agrees too
        again = sample_on_grid(s, FrequencyGrid(10.0, 200))
        np.testing.assert_array_equal(again.samples, s.samples)

    def test_hermitian_by_construction(self):
        g = FrequencyGrid(20.0, 4001)
        s = sample_on_grid(AnalyticCF.cauchy(1.3, 0.7), g)
        rep = invariant_report(s)
        assert rep.hermitian_error == 0.0
        assert rep.unit_error <= 1e-6
        assert rep.ok()

    def test_convolution_property(self):
        # CF of a sum of independent Gaussians equals the product of CFs
        g = FrequencyGrid(10.0, 2001)
        a = sample_on_grid(AnalyticCF.gaussian(0.5, 1.0), g)
        b = sample_on_grid(AnalyticCF.gaussian(-1.5, 0.5), g)
        s = sample_on_grid(AnalyticCF.gaussian(-1.0, 1.5), g)
        np.testing.assert_allclose(a.samples * b.samples, s.samples, rtol=0, atol=1e-15)


class TestEvaluate:
    def test_node_values_exact(self):
        g = FrequencyGrid(5.0, 101)
        s = sample_on_grid(AnalyticCF.cauchy(0.5, 1.0), g)
        np.testing.assert_array_equal(evaluate_cf(s, g.values), s.samples)

    def test_midpoint(self):
        g = FrequencyGrid(1.0, 3)
        s = SampledCF(g, [0.0, 1.0, 0.0])
        assert evaluate_cf(s, 0.5) == pytest.approx(0.5 + 0j)

    def test_off_node_cauchy(self):
        g = FrequencyGrid(50.0, 10001)
        s = sample_on_grid(AnalyticCF.cauchy(0, 1), g)
        assert abs(evaluate_cf(s, 0.5) - math.exp(-0.5)) < 1e-4
        t = np.random.default_rng(0).uniform(-50, 50, 1000)
        assert np.max(np.abs(evaluate_cf(s, t) - np.exp(-np.abs(t)))) < 1e-4

    def test_constant_extrapolation(self):
        g = FrequencyGrid(2.0, 5)
        s = SampledCF(g, [0.2, 0.5, 1.0, 0.5, 0.2])
        assert evaluate_cf(s, 100.0) == 0.2
        assert evaluate_cf(s, -3.0) == 0.2

    @pytest.mark.parametrize(
        "cf", [AnalyticCF.cauchy(0.3, 1.0), AnalyticCF.gaussian(0.3, 1.0)], ids=lambda c: c.kind
    )
    def test_affine_scalar_rule(self, cf):
        # z = f w + g  =>  phi_z(t) = e^{i t g} phi_w(f t)
        g = FrequencyGrid(50.0, 10001)
        f, shift = 0.8, -1.2
        z = LinearCombinationCF((sample_on_grid(cf, g),), [f], shift)
        t = g.values
        ref = np.exp(1j * t * shift) * cf(f * t)
        assert np.max(np.abs(z(t) - ref)) <= 1e-4


@settings(max_examples=50)
@given(t=st.floats(-60, 60, allow_nan=False))
def test_evaluate_continuous(t):
    g = FrequencyGrid(50.0, 1001)
    s = sample_on_grid(AnalyticCF.gaussian(0.2, 0.05), g)
    eps = 1e-9
    assert abs(evaluate_cf(s, t + eps) - evaluate_cf(s, t)) < 1e-6


class TestMoments:
    def test_gaussian_mean(self):
        m = moment_from_cf(AnalyticCF.gaussian(1.0, 1.0), 1)
        assert m.value == pytest.approx(1.0, abs=1e-3)
        assert not m.unstable

    def test_gaussian_second_moment(self):
        m = moment_from_cf(AnalyticCF.gaussian(0.0, 1.0), 2)
        assert m.value == pytest.approx(1.0, abs=1e-2)
        assert not m.unstable

    def test_sampled_gaussian(self):
        s = sample_on_grid(AnalyticCF.gaussian(1.0, 2.0), FrequencyGrid(50.0, 10001))
        m1, m2 = moment_from_cf(s, 1), moment_from_cf(s, 2)
        assert m1.value == pytest.approx(1.0, abs=1e-3) and not m1.unstable
        assert m2.value == pytest.approx(3.0, abs=1e-2) and not m2.unstable

    @pytest.mark.parametrize("k", [1, 2])
    def test_cauchy_flagged(self, k):
        assert moment_from_cf(AnalyticCF.cauchy(0.0, 1.0), k).unstable
        s = sample_on_grid(AnalyticCF.cauchy(1.0, 1.0), FrequencyGrid(50.0, 10001))
        assert moment_from_cf(s, k).unstable

    def test_order_three_rejected(self):
        with pytest.raises(UnsupportedOrderError):
            moment_from_cf(AnalyticCF.gaussian(0, 1), 3)


def test_marginal_set_sequence():
    ms = MarginalSet([AnalyticCF.cauchy(1, 1), AnalyticCF.cauchy(-1, 1)])
    assert len(ms) == ms.width == 2
    g = FrequencyGrid(5.0, 11)
    assert ms.sample_matrix(g).shape == (2, 11)
    assert all(isinstance(c, SampledCF) for c in ms.sampled(g))
