"""Half-space chance-constraint verification and quantile baselines."""

from __future__ import annotations

import dataclasses
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .cf import FrequencyGrid, LinearCombinationCF, MarginalSet, sample_on_grid
from .errors import (
    DegenerateConstraintError,
    ParameterError,
    StructureError,
    UnboundedQuantileError,
)
from .hilbert import HilbertParams, gil_pelaez, gil_pelaez_cdf
from .propagation import Network, Propagation, propagate_network

__all__ = [
    "HalfSpace",
    "VerificationProblem",
    "VerificationResult",
    "PolytopeResult",
    "output_cf",
    "output_scalar_cf",
    "verify_halfspace",
    "verify_polytope",
    "quantile",
    "scenario_sample_count",
    "scenario_quantile",
]

DIRECTIONS = ("LE", "GE")


@dataclass(frozen=True, eq=False)
class HalfSpace:
    """The event ``{c^T y <= d}`` (``LE``) or ``{c^T y >= d}`` (``GE``)."""

    c: np.ndarray
    d: float = 0.0
    direction: str = "LE"

    def __post_init__(self):
        c = np.array(self.c, dtype=float).reshape(-1)
        if c.size == 0 or not np.any(c):
            raise DegenerateConstraintError("half-space normal c must not be all zero")
        if self.direction not in DIRECTIONS:
            raise ParameterError(f"direction must be LE or GE, got {self.direction!r}")
        c.setflags(write=False)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", float(self.d))

    def to_dict(self) -> dict:
        return {"c": self.c.tolist(), "d": self.d, "direction": self.direction}


@dataclass(frozen=True, eq=False)
class VerificationProblem:
    network: Network
    inputs: tuple
    safety: tuple
    risk: float
    grid: FrequencyGrid = field(default_factory=lambda: FrequencyGrid(50.0, 10001))
    hilbert: HilbertParams = field(default_factory=HilbertParams)

    def __post_init__(self):
        safety = (self.safety,) if isinstance(self.safety, HalfSpace) else tuple(self.safety)
        if not safety:
            raise StructureError("at least one half-space is required")
        object.__setattr__(self, "safety", safety)
        object.__setattr__(self, "inputs", tuple(self.inputs))
        if not 0.0 < self.risk <= 1.0:
            raise ParameterError(f"risk p must lie in (0, 1], got {self.risk}")
        if len(self.inputs) != self.network.in_width:
            raise StructureError(
                f"{len(self.inputs)} input distributions for a network with "
                f"{self.network.in_width} inputs"
            )
        for i, hs in enumerate(safety):
            if hs.c.size != self.network.out_width:
                raise StructureError(
                    f"half-space {i} has {hs.c.size} coefficients, network "
                    f"has {self.network.out_width} outputs"
                )

    def replace(self, **changes) -> "VerificationProblem":
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class VerificationResult:
    p_hat: float
    verdict: str
    delta: float
    raw_cdf_value: float
    timing: float
    halfspace: HalfSpace
    imag_residue: float = 0.0

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self) -> dict:
        return {
            "p_hat": self.p_hat,
            "verdict": self.verdict,
            "delta": self.delta,
            "raw_cdf_value": self.raw_cdf_value,
            "timing_seconds": self.timing,
            "halfspace": self.halfspace.to_dict(),
            "imag_residue": self.imag_residue,
        }


def output_cf(out: MarginalSet, c) -> LinearCombinationCF:
    """Lazily evaluable CF of ``y = c^T x`` for independent output marginals."""
    c = np.asarray(c, dtype=float).reshape(-1)
    if c.size != len(out):
        raise StructureError(f"c has {c.size} entries for {len(out)} output marginals")
    if not np.any(c):
        raise DegenerateConstraintError("c must not be all zero")
    return LinearCombinationCF(tuple(out), c, 0.0)


def output_scalar_cf(out: MarginalSet, c, grid: FrequencyGrid):
    """Grid samples of ``phi_y(t) = prod_j phi_j(c_j t)``."""
    return sample_on_grid(output_cf(out, c), grid)


def _decide(p_hat, risk):
    threshold = 1.0 - risk
    return ("pass" if p_hat >= threshold else "fail"), p_hat - threshold


def _evaluate(problem, prop: Propagation, hs: HalfSpace, elapsed_base: float):
    start = time.perf_counter()
    phi_y = output_cf(prop.output, hs.c)
    ev = gil_pelaez(phi_y, hs.d, problem.hilbert)
    cdf = float(ev.probability)
    p_hat = cdf if hs.direction == "LE" else 1.0 - cdf
    verdict, delta = _decide(p_hat, problem.risk)
    raw = complex(ev.raw)
    return VerificationResult(
        p_hat=p_hat,
        verdict=verdict,
        delta=delta,
        raw_cdf_value=raw.real,
        timing=elapsed_base + time.perf_counter() - start,
        halfspace=hs,
        imag_residue=raw.imag,
    )


def verify_halfspace(problem: VerificationProblem, halfspace: HalfSpace | None = None,
                     propagation: Propagation | None = None) -> VerificationResult:
    """Check ``P(y in S) >= 1 - p`` for one half-space ``S``.

    ``halfspace`` defaults to the problem's first constraint. A previously
    computed ``propagation`` may be passed to skip the network pass (its time
    is then not included in ``timing``).
    """
    hs = halfspace if halfspace is not None else problem.safety[0]
    start = time.perf_counter()
    if propagation is None:
        propagation = propagate_network(
            problem.network, problem.inputs, problem.grid, problem.hilbert
        )
    return _evaluate(problem, propagation, hs, time.perf_counter() - start)


@dataclass(frozen=True)
class PolytopeResult:
    results: tuple
    bound: float
    verdict: str

    def to_dict(self) -> dict:
        return {
            "results": [r.to_dict() for r in self.results],
            "combined_lower_bound": self.bound,
            "verdict": self.verdict,
        }


def verify_polytope(problem: VerificationProblem) -> PolytopeResult:
    """Verify every half-space of the problem after one shared propagation.

    The joint probability is bounded below by the union bound
    ``max(0, 1 - sum_i (1 - p_hat_i))``, which also decides the verdict.
    """
    start = time.perf_counter()
    prop = propagate_network(problem.network, problem.inputs, problem.grid, problem.hilbert)
    shared = time.perf_counter() - start
    results = tuple(_evaluate(problem, prop, hs, shared) for hs in problem.safety)
    bound = union_bound([r.p_hat for r in results])
    verdict, _ = _decide(bound, problem.risk)
    return PolytopeResult(results, bound, verdict)


def union_bound(probabilities) -> float:
    return max(0.0, 1.0 - sum(1.0 - p for p in probabilities))


def _bisect(cdf, target, lo, hi, xtol):
    flo = cdf(lo) - target
    for _ in range(200):
        if hi - lo <= xtol:
            break
        mid = 0.5 * (lo + hi)
        fm = cdf(mid) - target
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _expand(cdf, target, center, width, limit, max_doublings=60):
    """Grow ``[center - width, center + width]`` until it brackets ``target``."""
    for _ in range(max_doublings + 1):
        w = min(width, limit)
        if cdf(center - w) <= target <= cdf(center + w):
            return center - w, center + w
        if w >= limit:
            break
        width *= 2.0
    raise UnboundedQuantileError(
        f"could not bracket CDF level {target:.4g} within the resolvable range "
        f"+-{limit:.4g} of {center:.4g}"
    )


def quantile(phi_y, p: float, params: HilbertParams, direction: str = "GE", xtol: float = 1e-3) -> float:
    """Threshold ``r`` at risk level ``p``.

    ``GE``: the largest ``r`` with ``P(y > r) >= 1 - p`` (CDF level ``p``).
    ``LE``: the smallest ``r`` with ``P(y <= r) >= 1 - p`` (level ``1 - p``).

    The search brackets the median and quartiles first, then starts from
    ``median +- 4 * IQR`` and doubles outward. The sinc inversion is
    periodic in ``x`` with period ``2 pi / h``, so brackets are confined to
    ``+- pi / h`` around the median.

    Raises
    ------
    UnboundedQuantileError
        The level cannot be bracketed inside the resolvable range.
    """
    if not 0.0 < p < 1.0:
        raise ParameterError(f"p must lie in (0, 1), got {p}")
    if direction not in DIRECTIONS:
        raise ParameterError(f"direction must be LE or GE, got {direction!r}")
    target = p if direction == "GE" else 1.0 - p
    limit = np.pi / params.h

    def cdf(x):
        return gil_pelaez_cdf(phi_y, x, params)

    lo, hi = _expand(cdf, 0.5, 0.0, 1.0, limit)
    median = _bisect(cdf, 0.5, lo, hi, xtol)
    lo, hi = _expand(cdf, 0.25, median, 1.0, limit)
    q1 = _bisect(cdf, 0.25, lo, hi, xtol)
    lo, hi = _expand(cdf, 0.75, median, 1.0, limit)
    q3 = _bisect(cdf, 0.75, lo, hi, xtol)
    width = max(4.0 * (q3 - q1), 4.0 * xtol)
    lo, hi = _expand(cdf, target, median, width, limit)
    return _bisect(cdf, target, lo, hi, xtol)


def scenario_sample_count(epsilon: float, delta: float) -> int:
    """Smallest ``N >= (2/eps) (ln(1/delta) + 1)``."""
    if not (0.0 < epsilon < 1.0 and 0.0 < delta < 1.0):
        raise ParameterError("epsilon and delta must lie in (0, 1)")
    return math.ceil((2.0 / epsilon) * (math.log(1.0 / delta) + 1.0))


def scenario_quantile(net: Network, inputs, epsilon: float, delta: float, seed: int,
                      c=None, samples=None) -> float:
    """Sampling baseline for the maximal safe threshold.

    Draws ``scenario_sample_count(epsilon, delta)`` inputs, propagates them
    exactly and returns the smallest scalar output ``c^T y``. ``samples``
    bypasses sampling with precomputed scalar outputs.
    """
    if samples is None:
        from .oracle import monte_carlo_outputs

        n = scenario_sample_count(epsilon, delta)
        c = np.ones(net.out_width) if c is None else c
        samples = monte_carlo_outputs(net, inputs, n, seed, c)
    return float(np.min(samples))
