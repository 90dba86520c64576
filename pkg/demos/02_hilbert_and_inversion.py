"""
Hilbert transform and CDF recovery
==================================

The sinc expansion turns the Hilbert transform into a weighted sum over
2M+1 nodes. Evaluated at t = 0 on a modulated CF it gives a CDF value
(Gil-Pelaez inversion).
"""

import numpy as np
from scipy import stats

from cfverify import AnalyticCF, HilbertParams, gil_pelaez, gil_pelaez_cdf, hilbert_sinc, j_a

params = HilbertParams(h=0.05, M=5000)
t = np.linspace(-10, 10, 20)  # avoids t = 0, where sin(t)/t needs its limit

# two textbook pairs
h = hilbert_sinc(lambda s: 1 / (1 + s**2), t, params)
print("max error, 1/(1+t^2):", np.max(np.abs(h - t / (1 + t**2))))
h = hilbert_sinc(lambda s: np.sinc(s / np.pi), t, params)
print("max error, sin(t)/t: ", np.max(np.abs(h - (1 - np.cos(t)) / t)))

# CDFs at a few quantiles
qs = np.array([0.05, 0.25, 0.5, 0.75, 0.95])
for name, cf, ref in [
    ("Cauchy(0,1)", AnalyticCF.cauchy(0, 1), stats.cauchy),
    ("N(0,1)", AnalyticCF.gaussian(0, 1), stats.norm),
]:
    got = gil_pelaez_cdf(cf, ref.ppf(qs), params)
    print(f"{name:12s}", np.round(got, 5), "max err", np.abs(got - qs).max())

# At an atom the inversion returns the midpoint of the jump.
ev = gil_pelaez(AnalyticCF.degenerate(0.0), 0.0, params, at_discontinuity=True)
print("point mass at 0, CDF(0) =", float(ev.probability))

# The J_a operator: J_a(phi)(t) = E[e^{itx} sgn(x - a)] / 2
x = np.random.default_rng(0).normal(0.3, np.sqrt(1.5), 10**6)
for a in (-0.4, 0.7):
    mc = 0.5 * np.mean(np.exp(0.5j * x) * np.sign(x - a))
    print(f"J_{a}(phi)(0.5) = {j_a(AnalyticCF.gaussian(0.3, 1.5), a, 0.5, params):.4f}  MC {mc:.4f}")
