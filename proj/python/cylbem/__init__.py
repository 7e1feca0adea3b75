"""Spectral error analysis of boundary element discretizations on a circular cylinder."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
