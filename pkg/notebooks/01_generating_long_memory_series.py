# coding: utf-8

# # Generating long-memory series
#
# ARFIMA(0,d,0) noise with d = H - 0.5, built by filtering Gaussian innovations
# through a truncated fractional-integration filter. Several coordinates can
# share equicorrelated innovations.

# In[1]:

import numpy as np

from pdda import ArfimaSpec, arfima, fractional_coefficients, generate


# The filter weights follow a_k = a_{k-1} (k - 1 + d) / k. For d > 0 they are
# positive and decay slowly, which is where the long memory comes from.

# In[2]:

for d in (-0.3, 0.0, 0.25):
    print(d, np.round(fractional_coefficients(d, 6), 4))


# A spec captures everything needed to reproduce a draw. The truncation K
# defaults to max(N, 2048).

# In[3]:

spec = ArfimaSpec(hurst_exponents=(0.3, 0.8), length=4096, rho=0.3, seed=11)
spec


# In[4]:

ts = generate(spec)
ts.values.shape, ts.values.mean(axis=0), np.corrcoef(ts.values.T)[0, 1]


# Persistence shows up in the lag-one autocorrelation: negative for H < 0.5
# and positive above it.

# In[5]:

def lag1(v):
    v = v - v.mean()
    return (v[:-1] @ v[1:]) / (v @ v)

for h in (0.2, 0.5, 0.8):
    print(h, round(lag1(arfima(h, 20000, seed=1).values[:, 0]), 3))


# Series round-trip through CSV exactly, so files written by the command line
# tool can be loaded back without loss.

# In[6]:

text = ts.to_csv()
print(text.splitlines()[:3])
