"""Lattice simulation lab for Brownian-tree level sets.

Everything is implemented in the C++ extension; this package re-exports it.
"""

from ._crtlab import *  # noqa: F401,F403
from ._crtlab import laws  # noqa: F401
