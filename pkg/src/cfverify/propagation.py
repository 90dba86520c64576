"""Pushing per-neuron characteristic functions through a ReLU network.

Each neuron carries one scalar CF. An affine layer combines the incoming
marginals as if they were independent; a ReLU layer applies

    phi_+(t) = (1 + phi(t)) / 2 + (i/2) [H(phi)(t) - H(phi)(0)]

with the sinc Hilbert transform.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .cf import (
    FrequencyGrid,
    LinearCombinationCF,
    MarginalSet,
    SampledCF,
    evaluate_cf,
    sample_on_grid,
)
from .errors import DimensionChainError, NumericFailureError, StructureError
from .hilbert import HilbertParams, gil_pelaez_cdf, hilbert_from_nodes, sinc_nodes

__all__ = [
    "AffineLayer",
    "Network",
    "LayerRecord",
    "LayerTrace",
    "Propagation",
    "affine_marginals",
    "relu_marginal",
    "relu_layer",
    "propagate_network",
    "relu_identity_check",
    "tail_correction",
]

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class AffineLayer:
    weights: np.ndarray = field(repr=False)
    bias: np.ndarray = field(repr=False)

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        b = np.array(self.bias, dtype=float).reshape(-1)
        if w.ndim != 2:
            raise StructureError(f"weights must be a matrix, got shape {w.shape}")
        if b.shape[0] != w.shape[0]:
            raise StructureError(
                f"bias length {b.shape[0]} does not match {w.shape[0]} weight rows"
            )
        if not (np.all(np.isfinite(w)) and np.all(np.isfinite(b))):
            raise StructureError("layer parameters must be finite")
        w.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "bias", b)

    @property
    def in_width(self) -> int:
        return self.weights.shape[1]

    @property
    def out_width(self) -> int:
        return self.weights.shape[0]


@dataclass(frozen=True, eq=False)
class Network:
    """Affine layers with a ReLU after every layer but the last."""

    layers: tuple

    def __post_init__(self):
        layers = tuple(
            l if isinstance(l, AffineLayer) else AffineLayer(*l) for l in self.layers
        )
        if not layers:
            raise StructureError("a network needs at least one layer")
        for k in range(1, len(layers)):
            if layers[k].in_width != layers[k - 1].out_width:
                raise DimensionChainError(
                    k,
                    f"expects {layers[k].in_width} inputs but layer {k - 1} "
                    f"produces {layers[k - 1].out_width}",
                )
        object.__setattr__(self, "layers", layers)

    @property
    def widths(self) -> tuple:
        return (self.layers[0].in_width,) + tuple(l.out_width for l in self.layers)

    @property
    def in_width(self) -> int:
        return self.layers[0].in_width

    @property
    def out_width(self) -> int:
        return self.layers[-1].out_width

    def __len__(self):
        return len(self.layers)


def _affine_cfs(layer: AffineLayer, inputs) -> list:
    if len(inputs) != layer.in_width:
        raise StructureError(
            f"layer expects {layer.in_width} input marginals, got {len(inputs)}"
        )
    comps = tuple(inputs)
    return [
        LinearCombinationCF(comps, layer.weights[j], layer.bias[j])
        for j in range(layer.out_width)
    ]


def affine_marginals(layer: AffineLayer, inputs, grid: FrequencyGrid) -> MarginalSet:
    """Marginal CFs of ``W x + b`` sampled on ``grid``.

    Output ``j`` is ``exp(i t b_j) prod_i phi_i(W_ji t)``, each factor read off
    its input CF (interpolating sampled CFs off-node).
    """
    return MarginalSet(sample_on_grid(c, grid) for c in _affine_cfs(layer, inputs))


def tail_correction(node_vals, t, params: HilbertParams) -> np.ndarray:
    """Transform of the constant tail beyond the outermost sinc nodes.

    CFs with an atom (every post-ReLU CF) do not decay; their real part
    settles at a constant ``c``. The truncated sinc sum omits the part of
    ``H(c)`` coming from ``|tau| > L`` with ``L = (M + 1/2) h``, which is
    ``(c / pi) ln((L - t) / (L + t))``. ``c`` is the mean real part over the
    outer 5% of nodes on each side, so oscillating tails contribute ~0. The
    term vanishes at ``t = 0``.
    """
    node_vals = np.asarray(node_vals)
    w = max(1, params.M // 20)
    c = 0.5 * (node_vals[:, :w].real.mean(axis=1) + node_vals[:, -w:].real.mean(axis=1))
    L = (params.M + 0.5) * params.h
    t = np.asarray(t, dtype=float)
    inside = np.abs(t) < L
    log_ratio = np.zeros_like(t)
    log_ratio[inside] = np.log((L - t[inside]) / (L + t[inside]))
    return c[:, None] / np.pi * log_ratio[None, :]


def relu_layer(cfs, grid: FrequencyGrid, params: HilbertParams, correct_tail: bool = True) -> list:
    """Apply the ReLU rule to several marginals in one kernel pass.

    Node values ``phi(m h)`` are read from each (evaluable) input CF, so
    inputs that are lazily evaluable keep their exact behaviour beyond the
    grid cutoff. ``H(phi)(0)`` is computed once per neuron. With
    ``correct_tail`` the constant tail omitted by the truncated sinc sum is
    added back in closed form (see :func:`tail_correction`).
    """
    cfs = list(cfs)
    if not cfs:
        return []
    nodes = sinc_nodes(params)
    t_pos = grid.nonnegative
    node_vals = np.stack([evaluate_cf(c, nodes) for c in cfs])
    at_t = np.stack([evaluate_cf(c, t_pos) for c in cfs])
    t_all = np.concatenate([[0.0], t_pos])
    ht = hilbert_from_nodes(node_vals, t_all, params)
    if correct_tail:
        ht = ht + tail_correction(node_vals, t_all, params)
    h0, ht_pos = ht[:, :1], ht[:, 1:]
    half = 0.5 * (1.0 + at_t) + 0.5j * (ht_pos - h0)
    return [SampledCF(grid, s) for s in grid.mirror(half)]


def relu_marginal(phi, params: HilbertParams, grid: FrequencyGrid | None = None,
                  correct_tail: bool = True) -> SampledCF:
    """CF of ``max(0, x)`` given the CF of ``x``.

    ``grid`` defaults to the grid of ``phi`` when it is a :class:`SampledCF`.
    """
    if grid is None:
        if not isinstance(phi, SampledCF):
            raise StructureError("a grid is required for an unsampled input CF")
        grid = phi.grid
    return relu_layer([phi], grid, params, correct_tail)[0]


@dataclass(frozen=True)
class LayerRecord:
    """One layer of a propagation trace.

    ``pre`` and ``post`` hold grid samples; ``pre_exact`` keeps the lazily
    evaluable affine CFs, which are exact beyond the grid cutoff.
    """

    index: int
    pre: MarginalSet
    post: MarginalSet | None
    pre_exact: MarginalSet


@dataclass(frozen=True)
class LayerTrace:
    layers: tuple

    def __iter__(self):
        return iter(self.layers)

    def __len__(self):
        return len(self.layers)

    def __getitem__(self, k):
        return self.layers[k]

    def cdf_curves(self, xs, params: HilbertParams, components=None):
        """Rows ``(layer, phase, component, x, cdf)`` for the requested neurons.

        ``components`` is a collection of neuron indices (default: the first
        three of every layer).
        """
        xs = np.asarray(xs, dtype=float)
        rows = []
        for rec in self.layers:
            phases = [("pre", rec.pre_exact)]
            if rec.post is not None:
                phases.append(("post", rec.post))
            for phase, ms in phases:
                wanted = range(min(3, len(ms))) if components is None else components
                for j in wanted:
                    if j >= len(ms):
                        continue
                    cdf = gil_pelaez_cdf(ms[j], xs, params)
                    rows.extend(
                        (rec.index, phase, j, float(x), float(c)) for x, c in zip(xs, cdf)
                    )
        return rows


@dataclass(frozen=True)
class Propagation:
    """Result of :func:`propagate_network`.

    ``output`` holds the final-layer marginals as lazily evaluable CFs
    (``output.sampled(grid)`` gives grid samples); ``trace`` is ``None``
    unless requested.
    """

    output: MarginalSet
    trace: LayerTrace | None = None


def _check_finite(samples: np.ndarray, layer: int, phase: str):
    bad = ~np.all(np.isfinite(samples), axis=-1)
    if np.any(bad):
        raise NumericFailureError(layer, int(np.argmax(bad)), phase)


def propagate_network(
    net: Network,
    inputs,
    grid: FrequencyGrid,
    params: HilbertParams,
    trace: bool = False,
    exact_affine: bool = True,
    correct_tail: bool = True,
) -> Propagation:
    """Propagate input marginals through ``net``.

    Parameters
    ----------
    inputs : sequence of CFs
        One CF per network input (typically :class:`~cfverify.cf.AnalyticCF`).
    exact_affine : bool
        If true (default), affine outputs are kept as lazy products of their
        inputs and evaluated exactly wherever the ReLU rule or the final
        inversion needs them. If false, each affine output is replaced by its
        grid samples, so values past the cutoff are the boundary samples.
    correct_tail : bool
        Passed to :func:`relu_layer`.

    Raises
    ------
    StructureError
        Input width does not match the network.
    NumericFailureError
        A marginal became non-finite; names the layer and component.
    """
    if len(inputs) != net.in_width:
        raise StructureError(
            f"network takes {net.in_width} inputs, got {len(inputs)} marginals"
        )
    current = list(inputs)
    records = []
    last = len(net.layers) - 1
    for k, layer in enumerate(net.layers):
        lazy = _affine_cfs(layer, current)
        pre = MarginalSet(sample_on_grid(c, grid) for c in lazy)
        _check_finite(np.stack([c.samples for c in pre]), k, "pre")
        feed = lazy if exact_affine else list(pre)
        if k == last:
            post = None
            current = feed
        else:
            post = MarginalSet(relu_layer(feed, grid, params, correct_tail))
            _check_finite(np.stack([c.samples for c in post]), k, "post")
            current = list(post)
        log.debug("layer %d propagated (%d neurons)", k, layer.out_width)
        if trace:
            records.append(LayerRecord(k, pre, post, MarginalSet(feed)))
    return Propagation(MarginalSet(current), LayerTrace(tuple(records)) if trace else None)


def relu_identity_check(x, t):
    """Residual of ``2 e^{it max(0,x)} = 1 + e^{itx} + e^{itx} sgn(x) - sgn(x)``."""
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    sg = np.sign(x)
    e = np.exp(1j * t * x)
    return np.abs(2.0 * np.exp(1j * t * np.maximum(0.0, x)) - (1.0 + e + e * sg - sg))
