"""Multi-marginal optimal transport over empirical marginals.

Thin Python surface over the C++ core: LP solve with dual certificates
(float64 or exact rational), minimal-Monge-cost enumeration, Wasserstein
barycenter extraction, and the seeded counterexample search.
"""

try:
    from ._mmot import *  # noqa: F401,F403  -- installed package layout
except ImportError:  # build-tree layout: extension module on sys.path
    from _mmot import *  # noqa: F401,F403
