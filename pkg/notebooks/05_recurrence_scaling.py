# coding: utf-8

# # Recurrence probability and range dimension
#
# P(eps, tau) is the share of point pairs tau apart that lie within eps of
# each other. Its decay in tau carries the exponent -H min(m, 1/H).

# In[1]:

import warnings

import numpy as np

from pdda import arfima, decay_report, range_dimension, recurrence_probability
from pdda.recurrence import epsilon_scaling, normalized_path


# In[2]:

range_dimension(0.25, 2), range_dimension(0.75, 2)


# Each coordinate is scaled to unit variance before integration, so a single
# threshold is meaningful for all of them.

# In[3]:

path = normalized_path(arfima((0.25, 0.25), 30000, rho=0.3, seed=1))
curve = recurrence_probability(path, 0.2)
print(curve.to_csv()[:120])


# In[4]:

rep = decay_report(curve, 0.25, 2)
rep.fitted_decay, rep.predicted_decay


# With one rough and one smooth coordinate the smooth one sets the range
# dimension and the decay steepens to about -1.

# In[5]:

aniso = normalized_path(arfima((0.25, 0.75), 30000, rho=0.3, seed=1))
with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    print(decay_report(recurrence_probability(aniso, 0.2), 0.75, 2).to_json())


# At a fixed lag, growing the threshold shows the static dimension instead.

# In[6]:

epsilon_scaling(path, 20, np.geomspace(0.05, 0.4, 8)).slope
