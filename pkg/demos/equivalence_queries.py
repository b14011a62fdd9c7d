"""
Which working models are compatible with a GC truth
====================================================

Solves for the compactly supported model that shares the microergodic
parameter of a generalized Cauchy model and asks the compatibility predicates
about it and about a deliberately mismatched pair.
"""

from gencauchy import covmodels as cm
from gencauchy import equivalence as eq

gamma = cm.practical_range_to_scale("GC", 0.3, 1.2, 5.0)
gc = cm.generalized_cauchy(1.2, 5.0, gamma)

# support of the generalized Wendland model (mu = 2.1, kappa = 0.1) that matches gc
beta = eq.equivalent_gw_support(gc, kappa=0.1, mu=2.1, d=1)
print(f"GC scale {gamma:.4f} -> compatible GW support {beta:.4f}")

gw = eq.equivalent_gw_model(gc, kappa=0.1, mu=2.1, d=1)
print(eq.compatible(gc, gw, d=1))

# halving the support breaks the match of microergodic parameters
print(eq.compatible(gc, gw.with_scale(beta / 2), d=1))

# a Matern model can match a GC model only when delta lies in (d/2, 2)
alpha = eq.equivalent_mt_scale(gc)
print(f"compatible Matern scale for the same GC model: {alpha:.4f}")
print(eq.compatible(gc, eq.equivalent_mt_model(gc), d=1))
