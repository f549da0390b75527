"""Random-matrix universal distributions and the models that converge to them.

Modules
-------
numerics        quadrature, Airy functions, dense linear algebra, KS distances
fredholm        Nystrom determinants of the sine and Airy kernels
painleve        Hastings-McLeod solution and the Tracy-Widom transforms
distributions   CDF tables, gap probabilities, tail-constant diagnostics
rmt_samplers    Gaussian ensembles, log-gases, LIS, Brownian last passage
asep            exclusion-process simulation and exact transition probabilities
cli             the ``widomkit`` command
"""

__version__ = "0.1.0"
