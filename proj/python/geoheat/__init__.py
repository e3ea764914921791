"""Geodesics on Riemannian manifolds via the geometric heat flow."""

from ._geoheat import *  # noqa: F401,F403
from ._geoheat import __doc__  # noqa: F401
