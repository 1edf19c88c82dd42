"""Auto-regressive time-series fitting: least squares and sparse-regularized SGD."""

from ._arnet import *  # noqa: F401,F403
from ._arnet import __version__  # noqa: F401
