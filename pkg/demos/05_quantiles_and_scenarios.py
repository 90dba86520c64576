"""
Safe thresholds: CF quantile vs scenario sampling
=================================================

The largest r with P(y > r) >= 1 - p can be read off the CF-derived CDF.
The scenario approach instead takes the minimum of N samples, with N
chosen so the guarantee holds with confidence 1 - delta.
"""

import numpy as np
from scipy import stats

from cfverify import AnalyticCF, HilbertParams, quantile, scenario_quantile, scenario_sample_count
from cfverify.errors import UnboundedQuantileError
from cfverify.propagation import Network

params = HilbertParams(0.05, 5000)

print("samples for eps=0.05, delta=1e-5:", scenario_sample_count(0.05, 1e-5))

for cf, ref in [(AnalyticCF.gaussian(0, 1), stats.norm), (AnalyticCF.cauchy(0, 1), stats.cauchy)]:
    r = quantile(cf, 0.05, params, "GE")
    print(f"{cf.kind:9s} CF quantile {r:8.4f}  exact {ref.ppf(0.05):8.4f}")

# scenario baseline on an identity network
ident = Network([(np.eye(1), [0.0])])
for seed in range(3):
    r = scenario_quantile(ident, (AnalyticCF.gaussian(0, 1),), 0.05, 1e-5, seed)
    print(f"scenario threshold (seed {seed}): {r:.3f}, true P(y > r) = {stats.norm.sf(r):.4f}")

# The sinc inversion is periodic in x with period 2 pi / h. A Cauchy law puts
# about 1% of its mass beyond +-pi/h at h = 0.05, so its 1% quantile is out
# of reach there and needs a smaller h (and more nodes to keep M h fixed).
try:
    quantile(AnalyticCF.cauchy(0, 1), 0.01, params)
except UnboundedQuantileError as exc:
    print("h=0.05:", exc)
fine = HilbertParams(0.01, 25000)
print(f"h=0.01: {quantile(AnalyticCF.cauchy(0, 1), 0.01, fine):.3f}  exact {stats.cauchy.ppf(0.01):.3f}")
