"""Minimax-optimal state feedback for positive linear systems."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
