"""Entropy, dimension and rate-distortion estimators for Z and Z^2 subshifts."""

from ._core import *  # noqa: F401,F403
from ._core import Error, InvalidArgument, ParseError, ResourceError  # noqa: F401

__version__ = "0.1.0"
