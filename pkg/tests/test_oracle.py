import csv
import io

import numpy as np
import pytest
from scipy import stats

from cfverify.cf import AnalyticCF, FrequencyGrid
from cfverify.errors import ParameterError, StructureError
from cfverify.hilbert import HilbertParams
from cfverify.oracle import (
    compare,
    empirical_cdf,
    empirical_probability,
    forward,
    kolmogorov_distance,
    monte_carlo_outputs,
    run_sweep,
    sample_inputs,
    write_sweep_csv,
)
from cfverify.propagation import Network
from cfverify.verification import HalfSpace, VerificationProblem, verify_halfspace

SPECS = (AnalyticCF.cauchy(1, 1), AnalyticCF.gaussian(1, 2), AnalyticCF.uniform(-1, 3))


def test_seed_determinism():
    a = sample_inputs(SPECS, 1000, 42).values
    b = sample_inputs(SPECS, 1000, 42).values
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, sample_inputs(SPECS, 1000, 43).values)


def test_batch_read_only():
    batch = sample_inputs(SPECS, 10, 0)
    assert batch.n == 10
    with pytest.raises(ValueError):
        batch.values[0, 0] = 1.0


@pytest.mark.parametrize(
    "col,dist",
    [(0, stats.cauchy(1, 1)), (1, stats.norm(1, np.sqrt(2))), (2, stats.uniform(-1, 4))],
)
def test_marginals_match_reference(col, dist):
    x = sample_inputs(SPECS, 50_000, 5).values[:, col]
    assert stats.kstest(x, dist.cdf).statistic < 0.01


def test_cauchy_samples_finite():
    x = sample_inputs((AnalyticCF.cauchy(0, 1),), 200_000, 1).values
    assert np.all(np.isfinite(x))


def test_unknown_spec():
    with pytest.raises(ParameterError):
        sample_inputs(("cauchy",), 10, 0)
    with pytest.raises(ParameterError):
        sample_inputs(SPECS, 0, 0)


def test_forward_shape_check():
    net = Network([(np.eye(2), np.zeros(2))])
    with pytest.raises(StructureError):
        forward(net, np.ones(3))
    np.testing.assert_array_equal(forward(net, [1.0, -2.0]), [1.0, -2.0])


def test_empirical_cdf_ties():
    v = [0.0, 0.0, 1.0, 2.0]
    assert empirical_cdf(v, 0.0) == 0.5
    np.testing.assert_array_equal(empirical_cdf(v, [-1.0, 1.0, 5.0]), [0.0, 0.75, 1.0])
    assert empirical_probability(v, 0.0, "GE") == 1.0
    assert empirical_probability(v, 0.0, "LE") == 0.5


def test_kolmogorov_distance():
    assert kolmogorov_distance([0.5, 1.0], [0.0, 1.0], [0.0, 1.0]) == 0.0
    assert kolmogorov_distance([0.2], [0.0, 1.0], [0.5]) == pytest.approx(0.3)


def test_compare_identity():
    net = Network([(np.eye(1), [0.0])])
    prob = VerificationProblem(net, (AnalyticCF.cauchy(0, 1),), HalfSpace([1.0], 0.0), 0.6)
    res = verify_halfspace(prob)
    rep = compare(prob, res, 100_000, 0)
    assert rep.p_hat_mc == pytest.approx(0.5, abs=5e-3)
    assert rep.delta_delta == pytest.approx(rep.delta_cf - rep.delta_mc)
    assert abs(rep.delta_delta) < 5e-3
    assert rep.to_dict()["n_samples"] == 100_000


def test_monte_carlo_projection():
    net = Network([(np.eye(2), np.zeros(2))])
    ins = (AnalyticCF.gaussian(0, 1), AnalyticCF.gaussian(1, 1))
    y = monte_carlo_outputs(net, ins, 10, 0)
    np.testing.assert_allclose(monte_carlo_outputs(net, ins, 10, 0, [1.0, -1.0]), y[:, 0] - y[:, 1])


def _sweep_base():
    net = Network([(np.ones((3, 2)), np.zeros(3)), (np.ones((1, 3)), [0.0])])
    return VerificationProblem(
        net,
        (AnalyticCF.cauchy(1, 1), AnalyticCF.cauchy(-1, 1)),
        HalfSpace([1.0], 0.0, "GE"),
        0.05,
        FrequencyGrid(50.0, 1001),
        HilbertParams(0.5, 500),
    )


def test_sweep_deterministic_columns():
    settings = [(0.5, 1001, 500), (0.7, 1001, 100)]
    rows_a = run_sweep(_sweep_base(), settings, 2, 11, 2000)
    rows_b = run_sweep(_sweep_base(), settings, 2, 11, 2000)
    assert [(r.h, r.N, r.M, r.mean_abs_delta_delta) for r in rows_a] == [
        (r.h, r.N, r.M, r.mean_abs_delta_delta) for r in rows_b
    ]
    buf = io.StringIO()
    write_sweep_csv(rows_a, buf)
    table = list(csv.reader(io.StringIO(buf.getvalue())))
    assert table[0] == ["h", "N", "M", "mean_abs_delta_delta", "mean_time_seconds"]
    assert len(table) == 3
    assert table[1][:3] == ["0.5", "1001", "500"]


def test_sweep_trials_validated():
    with pytest.raises(ParameterError):
        run_sweep(_sweep_base(), [(0.5, 1001, 500)], 0, 0)
