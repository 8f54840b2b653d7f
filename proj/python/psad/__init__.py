"""Gradients and sparse Hessians of partially separable functions.

The compiled extension carries the whole public surface; this package just
re-exports it.
"""

from ._psad import *  # noqa: F401,F403
from ._psad import __doc__  # noqa: F401
