"""
Verifying a chance constraint on a small network
================================================

A random 2-10-1 ReLU network receives two independent Cauchy inputs. We
ask whether P(y >= 0) >= 0.95 and compare with Monte Carlo.

Marginal CFs are propagated one neuron at a time and recombined as if
independent. Hidden units that share inputs are in fact dependent, and
the comparison below shows how much that matters.
"""

import numpy as np

from cfverify import AnalyticCF, HalfSpace, VerificationProblem, compare, random_network, verify_halfspace
from cfverify.oracle import forward

net = random_network((2, 10, 1), seed=0)
inputs = (AnalyticCF.cauchy(1, 1), AnalyticCF.cauchy(-1, 1))
problem = VerificationProblem(net, inputs, HalfSpace([1.0], 0.0, "GE"), risk=0.05)

res = verify_halfspace(problem)
print(f"p_hat = {res.p_hat:.4f}  verdict = {res.verdict}  margin = {res.delta:+.4f}  ({res.timing:.2f}s)")

rep = compare(problem, res, n=100_000, seed=0)
print(f"Monte Carlo p = {rep.p_hat_mc:.4f}, delta-delta = {rep.delta_delta:+.4f}")

# Monte Carlo with the hidden units sampled independently, which is the
# model the CF computation actually solves.
rng = np.random.default_rng(0)
n = 100_000
W0, b0 = net.layers[0].weights, net.layers[0].bias
W1, b1 = net.layers[1].weights, net.layers[1].bias
hidden = np.empty((n, 10))
for j in range(10):
    x = np.column_stack([1 + rng.standard_cauchy(n), -1 + rng.standard_cauchy(n)])
    hidden[:, j] = np.maximum(x @ W0[j] + b0[j], 0)
y_indep = hidden @ W1[0] + b1[0]
print(f"independent-units MC p = {np.mean(y_indep >= 0):.4f}")
