"""
The ReLU rule for a single neuron
=================================

For y = max(0, x),

    phi_y(t) = (1 + phi_x(t)) / 2 + (i/2) [H(phi_x)(t) - H(phi_x)(0)].

The output has an atom at 0 with mass P(x <= 0), so its CDF jumps there.
"""

import numpy as np
from scipy import stats

from cfverify import AnalyticCF, FrequencyGrid, HilbertParams, gil_pelaez_cdf, relu_marginal, sample_on_grid
from cfverify.propagation import relu_identity_check

grid = FrequencyGrid(50.0, 10001)
params = HilbertParams(0.05, 5000)

# The rule rests on 2 e^{it max(0,x)} = 1 + e^{itx} + sgn(x) (e^{itx} - 1).
rng = np.random.default_rng(1)
print("identity residual:", relu_identity_check(rng.uniform(-9, 9, 1000), rng.uniform(-9, 9, 1000)).max())

phi = sample_on_grid(AnalyticCF.gaussian(0, 1), grid)
relu = relu_marginal(phi, params)

xs = np.array([-1.0, 0.0, 0.1, 0.5, 1.0, 2.0])
mc = np.maximum(rng.standard_normal(10**6), 0)
print("   x    CF-CDF     MC-CDF")
for x, c in zip(xs, gil_pelaez_cdf(relu, xs, params)):
    print(f"{x:5.1f}  {c:.4f}    {np.mean(mc <= x):.4f}")
print("the jump at 0 goes from 0 to 0.5; the inversion returns about its midpoint 0.25")

# Applying ReLU twice changes nothing.
again = relu_marginal(relu, params)
print("idempotence error:", np.abs(again.samples - relu.samples).max())

# Mostly positive or mostly negative inputs give the obvious limits.
for mu in (10, -10):
    r = relu_marginal(sample_on_grid(AnalyticCF.gaussian(mu, 1), grid), params)
    print(f"mu={mu:+d}: phi_relu(1) = {complex(r(1.0)):.4f}")
