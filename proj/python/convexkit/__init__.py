"""Convex optimization toolkit.

Certified projections onto convex sets, sampled convexity/coercivity checks,
projected gradient descent with first-order optimality certificates, and a
discretized Dirichlet-energy application cross-checked against a conjugate
gradient oracle.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__ as _core_doc  # noqa: F401

__version__ = "0.1.0"
