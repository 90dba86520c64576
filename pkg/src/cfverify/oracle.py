"""Monte-Carlo ground truth: sampling, exact forward passes, comparisons."""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass, field

import numpy as np

from .cf import AnalyticCF
from .errors import ParameterError, StructureError
from .propagation import Network

__all__ = [
    "make_rng",
    "SampleBatch",
    "ComparisonReport",
    "sample_inputs",
    "forward",
    "empirical_cdf",
    "empirical_probability",
    "kolmogorov_distance",
    "monte_carlo_outputs",
    "compare",
    "SweepRow",
    "run_sweep",
    "write_sweep_csv",
]

_BITS = 53


def make_rng(seed) -> np.random.Generator:
    """Counter-based Philox stream; identical across platforms for a seed."""
    return np.random.Generator(np.random.Philox(int(seed)))


def _open_uniform(rng, n):
    # (k + 1/2) / 2^53 never hits 0 or 1.
    k = rng.integers(0, 2**_BITS, size=n, dtype=np.uint64)
    return (k.astype(float) + 0.5) / float(2**_BITS)


@dataclass(frozen=True, eq=False)
class SampleBatch:
    values: np.ndarray = field(repr=False)
    seed: int
    specs: tuple

    @property
    def n(self) -> int:
        return self.values.shape[0]


def sample_inputs(specs, n: int, seed: int) -> SampleBatch:
    """Draw ``n`` independent input vectors, one column per spec.

    Columns are filled in order from a single Philox stream, so the batch is
    a pure function of ``(specs, n, seed)``.
    """
    if n < 1:
        raise ParameterError(f"need at least one sample, got {n}")
    specs = tuple(specs)
    rng = make_rng(seed)
    cols = []
    for spec in specs:
        if not isinstance(spec, AnalyticCF):
            raise ParameterError(f"cannot sample from {spec!r}")
        if spec.kind == "cauchy":
            x0, gamma = spec.params
            cols.append(x0 + gamma * np.tan(np.pi * (_open_uniform(rng, n) - 0.5)))
        elif spec.kind == "gaussian":
            mu, var = spec.params
            cols.append(mu + np.sqrt(var) * rng.standard_normal(n))
        elif spec.kind == "uniform":
            a, b = spec.params
            cols.append(a + (b - a) * _open_uniform(rng, n))
        elif spec.kind == "degenerate":
            cols.append(np.full(n, spec.params[0]))
        else:
            raise ParameterError(f"unknown distribution kind {spec.kind!r}")
    values = np.stack(cols, axis=1) if cols else np.empty((n, 0))
    values.setflags(write=False)
    return SampleBatch(values, int(seed), specs)


def forward(net: Network, x):
    """Exact network evaluation on one input vector or a batch of rows."""
    a = np.asarray(x, dtype=float)
    if a.shape[-1] != net.in_width:
        raise StructureError(
            f"network takes {net.in_width} inputs, got trailing dimension {a.shape[-1]}"
        )
    last = len(net.layers) - 1
    for k, layer in enumerate(net.layers):
        a = a @ layer.weights.T + layer.bias
        if k != last:
            a = np.maximum(a, 0.0)
    return a


def empirical_cdf(values, x):
    """Fraction of ``values`` that are ``<= x`` (``x`` may be an array)."""
    v = np.sort(np.ravel(np.asarray(values, dtype=float)))
    if v.size == 0:
        raise ParameterError("empirical CDF of an empty batch")
    res = np.searchsorted(v, x, side="right") / v.size
    return float(res) if np.ndim(res) == 0 else res


def empirical_probability(values, d: float, direction: str) -> float:
    """Frequency of ``{y <= d}`` (LE) or ``{y >= d}`` (GE); ties satisfy."""
    values = np.asarray(values, dtype=float)
    hit = values <= d if direction == "LE" else values >= d
    return float(np.mean(hit))


def kolmogorov_distance(cdf_values, samples, xs) -> float:
    """``max |F(x) - F_n(x)|`` over the probe points ``xs``."""
    return float(np.max(np.abs(np.asarray(cdf_values) - empirical_cdf(samples, xs))))


def monte_carlo_outputs(net: Network, specs, n: int, seed: int, c=None):
    """Propagate a seeded input batch; returns outputs (or ``c^T y`` if given)."""
    y = forward(net, sample_inputs(specs, n, seed).values)
    return y if c is None else y @ np.asarray(c, dtype=float)


@dataclass(frozen=True)
class ComparisonReport:
    p_hat_cf: float
    p_hat_mc: float
    delta_cf: float
    delta_mc: float
    delta_delta: float
    n_samples: int
    seconds_cf: float
    seconds_mc: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def compare(problem, cf_result, n: int, seed: int) -> ComparisonReport:
    """Monte-Carlo counterpart of a CF verification result.

    The half-space is taken from ``cf_result``. Both margins are measured
    against ``1 - p``; ``delta_delta = delta_cf - delta_mc``.
    """
    hs = cf_result.halfspace
    start = time.perf_counter()
    y = monte_carlo_outputs(problem.network, problem.inputs, n, seed, hs.c)
    p_mc = empirical_probability(y, hs.d, hs.direction)
    elapsed = time.perf_counter() - start
    delta_mc = p_mc - (1.0 - problem.risk)
    return ComparisonReport(
        p_hat_cf=cf_result.p_hat,
        p_hat_mc=p_mc,
        delta_cf=cf_result.delta,
        delta_mc=delta_mc,
        delta_delta=cf_result.delta - delta_mc,
        n_samples=int(n),
        seconds_cf=cf_result.timing,
        seconds_mc=elapsed,
    )


@dataclass(frozen=True)
class SweepRow:
    h: float
    N: int
    M: int
    mean_abs_delta_delta: float
    mean_time_seconds: float
    trials: int


def run_sweep(base, settings, trials: int, seed: int, n_samples: int = 10_000, widths=None):
    """Ensemble of random-network trials for each ``(h, N, M)`` setting.

    Trial ``i`` uses ``random_network(widths, seed + i)`` with the inputs,
    safety set and risk of ``base`` (a ``VerificationProblem``) and the
    Monte-Carlo seed ``seed + i``. The same networks are reused across
    settings so rows are directly comparable.

    Returns
    -------
    list of SweepRow
    """
    from .cf import FrequencyGrid
    from .hilbert import HilbertParams
    from .model_io import random_network
    from .verification import verify_halfspace

    if trials < 1:
        raise ParameterError(f"trials must be >= 1, got {trials}")
    widths = tuple(widths or base.network.widths)
    hs = base.safety[0]
    rows = []
    for h, N, M in settings:
        errs, times = [], []
        for i in range(trials):
            net = random_network(widths, seed + i)
            prob = base.replace(
                network=net,
                grid=FrequencyGrid(base.grid.t_max, int(N)),
                hilbert=HilbertParams(float(h), int(M)),
            )
            res = verify_halfspace(prob, hs)
            rep = compare(prob, res, n_samples, seed + i)
            errs.append(abs(rep.delta_delta))
            times.append(res.timing)
        rows.append(SweepRow(float(h), int(N), int(M), float(np.mean(errs)), float(np.mean(times)), trials))
    return rows


def write_sweep_csv(rows, fh):
    w = csv.writer(fh)
    w.writerow(["h", "N", "M", "mean_abs_delta_delta", "mean_time_seconds"])
    for r in rows:
        w.writerow([r.h, r.N, r.M, f"{r.mean_abs_delta_delta:.6f}", f"{r.mean_time_seconds:.6f}"])
