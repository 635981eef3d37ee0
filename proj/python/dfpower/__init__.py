"""DeGroot-Friedkin social power evolution.

Matrix and vertex indices are 0-based on the Python side.
"""

from ._core import *  # noqa: F401,F403
