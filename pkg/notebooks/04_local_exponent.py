# coding: utf-8

# # Scale-dependent exponent
#
# When coordinates carry different exponents the displacement profile is a
# sum of power laws. Its local log-log slope changes with tau, moving from a
# mixture value towards the dominant exponent.

# In[1]:

import numpy as np

from pdda import arfima, cumulative_path, distance_profile, local_hurst
from pdda.estimators import local_lag_grid
from pdda.montecarlo import split_seed
from pdda.path import DistanceProfile


# A synthetic mixture first, where the answer is known analytically.

# In[2]:

tau = np.unique(np.geomspace(1, 10**5, 40).astype(int))
m2 = tau**0.5 + tau**1.0
curve = local_hurst(DistanceProfile(tau, m2.astype(float), np.ones_like(tau)), smoothing_window=1)
np.round(curve[::6], 3)


# Now an ensemble of bivariate series with exponents 0.25 and 0.50.

# In[3]:

n = 3000
lags = local_lag_grid(n)
curves = [
    local_hurst(distance_profile(cumulative_path(arfima((0.25, 0.5), n, rho=0.3, seed=split_seed(1, 0, r))), lags))[:, 1]
    for r in range(20)
]
mean = np.mean(curves, axis=0)
for t, h in list(zip(lags, mean))[::5]:
    print(t, round(h, 3))


# The finite-sample curve rises only slightly over the available lags: the
# centring of the path pulls large-lag displacements down, which offsets the
# growth expected from the dominant coordinate.
