# coding: utf-8

# # Geometry of the cumulative path
#
# The analysis never looks at the raw series directly. It integrates the
# centred samples into a trajectory and studies how far apart its points are.

# In[1]:

import numpy as np

from pdda import arfima, cumulative_path, distance_matrix, distance_profile, window_geometry


# In[2]:

x = arfima((0.3, 0.75), 3000, rho=0.3, seed=5)
path = cumulative_path(x)
path.z[:3], path.z[-1]


# The path ends at the origin (up to rounding) because the samples were
# centred before summation.

# ## Distance matrix
#
# For short series the full matrix of pairwise separations is available. It
# is the unthresholded version of a recurrence plot.

# In[3]:

D = distance_matrix(cumulative_path(arfima((0.3, 0.75), 400, rho=0.3, seed=5)))
D.shape, D.max(), np.allclose(D, D.T)


# ## Distance profile
#
# The mean squared separation at lag tau is computed in streaming fashion,
# one pass per lag, so long series never need the full matrix.

# In[4]:

prof = distance_profile(path, [1, 2, 4, 8, 16, 32, 64, 128, 256])
for tau, m2 in zip(prof.lags, prof.m2):
    print(tau, round(m2, 2))


# Its log-log slope is 2H. The more persistent coordinate dominates at large
# lags, so the apparent exponent drifts upward.

# In[5]:

np.round(0.5 * np.diff(np.log(prof.m2)) / np.diff(np.log(prof.lags)), 3)


# ## Window diameters
#
# Each block of n samples is re-integrated from its own mean, and the largest
# distance between its points is compared with the spread of its increments.
# In one dimension this is the familiar rescaled range.

# In[6]:

g = window_geometry(path, window_sizes=[16, 64, 256, 1024])
print(g.to_csv())
g.ratios
