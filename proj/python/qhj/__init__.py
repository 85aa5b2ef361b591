"""Quantum Hamilton-Jacobi toolkit for quadratic time-dependent Hamiltonians.

The compiled extension carries the full API; this package re-exports it.
"""

from ._core import *  # noqa: F401,F403
