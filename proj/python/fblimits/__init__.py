"""Exact finite-blocklength limits of lossless compression.

Thin re-export of the compiled ``_fblimits`` extension. Big integer counts
come back as Python ints.
"""

from ._fblimits import *  # noqa: F401,F403
from ._fblimits import __version__  # noqa: F401
