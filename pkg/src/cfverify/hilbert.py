"""Sinc-expansion Hilbert transform and CDF recovery from a CF.

The Hilbert transform used throughout is

    H(f)(t) = (1/pi) p.v. int f(tau) / (t - tau) dtau.

``f`` is replaced by its cardinal series on the nodes ``m h`` for
``m = -M..M``; each basis function ``sinc(tau/h - m)`` has the closed-form
transform ``(1 - cos(pi u)) / (pi u)`` with ``u = t/h - m`` (0 at ``u = 0``),
so ``H(f)(t)`` becomes a weighted sum of the node values.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .cf import evaluate_cf
from .errors import ParameterError

__all__ = [
    "HilbertParams",
    "CdfEvaluation",
    "sinc_nodes",
    "sinc_kernel",
    "hilbert_from_nodes",
    "hilbert_sinc",
    "j_a",
    "gil_pelaez",
    "gil_pelaez_cdf",
]

# Upper bound on kernel-chunk size (elements) to keep memory flat.
_CHUNK_ELEMENTS = 2_000_000


@dataclass(frozen=True)
class HilbertParams:
    """Sinc node spacing ``h`` and half-width ``M`` (``2M+1`` nodes)."""

    h: float = 0.05
    M: int = 5000

    def __post_init__(self):
        if not (np.isfinite(self.h) and self.h > 0):
            raise ParameterError(f"h must be positive, got {self.h}")
        if int(self.M) != self.M or self.M < 1:
            raise ParameterError(f"M must be a positive integer, got {self.M}")
        object.__setattr__(self, "h", float(self.h))
        object.__setattr__(self, "M", int(self.M))

    @property
    def n_terms(self) -> int:
        return 2 * self.M + 1


def sinc_nodes(params: HilbertParams) -> np.ndarray:
    return np.arange(-params.M, params.M + 1) * params.h


def sinc_kernel(t, params: HilbertParams) -> np.ndarray:
    """Hilbert transforms of the sinc basis functions, shape ``(len(t), 2M+1)``.

    Uses ``1 - cos(pi u) = 2 sin^2(pi u / 2)`` and the parity of ``m`` to
    reduce the trigonometry to one call per evaluation point:
    ``sin^2(pi u/2)`` equals ``sin^2(pi t/2h)`` for even ``m`` and
    ``cos^2(pi t/2h)`` for odd ``m``.
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    m = np.arange(-params.M, params.M + 1)
    x = t / params.h
    u = x[:, None] - m[None, :]
    s2 = np.sin(0.5 * np.pi * x) ** 2
    c2 = 1.0 - s2
    num = np.where(m % 2 == 0, s2[:, None], c2[:, None])
    inv = np.zeros_like(u)
    np.divide(1.0, u, out=inv, where=u != 0)
    return (2.0 / np.pi) * num * inv


def hilbert_from_nodes(values, t, params: HilbertParams) -> np.ndarray:
    """Sinc Hilbert transform from precomputed node values.

    Parameters
    ----------
    values : array_like, shape (..., 2M+1)
        ``f(m h)`` for ``m = -M..M``; leading axes are independent functions.
    t : array_like
        Evaluation points.

    Returns
    -------
    ndarray, shape (..., len(t))
    """
    values = np.asarray(values, dtype=complex)
    if values.shape[-1] != params.n_terms:
        raise ParameterError(
            f"expected {params.n_terms} node values, got {values.shape[-1]}"
        )
    t = np.atleast_1d(np.asarray(t, dtype=float))
    batch = values.shape[:-1]
    v = values.reshape(-1, params.n_terms)
    # Real and imaginary parts are transformed separately: the kernel is real.
    stacked = np.concatenate([v.real, v.imag], axis=0).T  # (2M+1, 2B)
    nb = v.shape[0]
    out = np.empty((nb, t.size), dtype=complex)
    rows = max(1, _CHUNK_ELEMENTS // params.n_terms)
    for start in range(0, t.size, rows):
        sl = slice(start, start + rows)
        block = sinc_kernel(t[sl], params) @ stacked  # (rows, 2B)
        out[:, sl] = (block[:, :nb] + 1j * block[:, nb:]).T
    return out.reshape(batch + (t.size,))


def hilbert_sinc(f, t, params: HilbertParams):
    """Approximate ``H(f)(t)``.

    ``f`` is any vectorised callable (an evaluable CF, for instance); it is
    sampled once at the absolute nodes ``m h`` and reused for every ``t``.
    A scalar ``t`` gives a complex scalar.
    """
    scalar = np.ndim(t) == 0
    vals = evaluate_cf(f, sinc_nodes(params))
    out = hilbert_from_nodes(vals, np.ravel(t), params)
    return complex(out[0]) if scalar else out.reshape(np.shape(t))


def j_a(phi, a: float, t, params: HilbertParams):
    """The modulated operator ``J_a(phi)(t) = (1/2 pi i) int e^{-i a eta} phi(t+eta) d eta/eta``.

    Substituting ``tau = t + eta`` gives
    ``J_a(phi)(t) = (i/2) e^{i a t} H(tau -> e^{-i a tau} phi(tau))(t)``,
    which for ``a = 0`` is exactly ``(i/2) H(phi)(t)``.
    """
    a = float(a)
    scalar = np.ndim(t) == 0
    tt = np.ravel(np.asarray(t, dtype=float))
    nodes = sinc_nodes(params)
    vals = evaluate_cf(phi, nodes)
    if a != 0.0:
        vals = vals * np.exp(-1j * a * nodes)
    out = 0.5j * hilbert_from_nodes(vals, tt, params)
    if a != 0.0:
        out = out * np.exp(1j * a * tt)
    return complex(out[0]) if scalar else out.reshape(np.shape(t))


class CdfEvaluation(NamedTuple):
    """Gil-Pelaez output with diagnostics.

    ``raw`` is the complex value before clamping; its imaginary part should be
    ~0 for a Hermitian CF. At a jump of the CDF the method returns the jump
    midpoint, which ``at_discontinuity`` records for the caller.
    """

    probability: np.ndarray
    raw: np.ndarray
    at_discontinuity: bool = False


def _odd_node_weights(params: HilbertParams):
    # At t = 0 only odd m contribute, with weight -2 / (pi m).
    m = np.arange(1, params.M + 1, 2)
    return m, -2.0 / (np.pi * m)


def gil_pelaez(phi, x, params: HilbertParams, at_discontinuity: bool = False) -> CdfEvaluation:
    """CDF at ``x`` via ``1/2 - (i/2) H(t -> e^{-itx} phi(t))(0)``.

    ``x`` may be an array; ``phi`` is sampled once and re-modulated per point.
    """
    x_arr = np.asarray(x, dtype=float)
    xs = np.ravel(x_arr)
    m, w = _odd_node_weights(params)
    tau = m * params.h
    pos = evaluate_cf(phi, tau)
    neg = evaluate_cf(phi, -tau)
    raw = np.empty(xs.size, dtype=complex)
    rows = max(1, _CHUNK_ELEMENTS // max(1, m.size))
    for start in range(0, xs.size, rows):
        xb = xs[start : start + rows, None]
        rot = np.exp(-1j * xb * tau[None, :])
        # Node -m has weight +2/(pi m) and modulation conj(rot).
        h0 = (rot * pos[None, :] - np.conj(rot) * neg[None, :]) @ w
        raw[start : start + rows] = 0.5 - 0.5j * h0
    prob = np.clip(raw.real, 0.0, 1.0)
    shape = x_arr.shape
    return CdfEvaluation(prob.reshape(shape), raw.reshape(shape), at_discontinuity)


def gil_pelaez_cdf(phi, x, params: HilbertParams):
    """Clamped CDF value(s) of the variable with CF ``phi``."""
    p = gil_pelaez(phi, x, params).probability
    return float(p) if np.ndim(p) == 0 else p
