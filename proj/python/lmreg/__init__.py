"""Long-memory heteroscedastic regression: simulation, estimation and
lack-of-fit testing. Thin wrapper over the compiled core."""

from ._lmreg import *  # noqa: F401,F403
from ._lmreg import __version__  # noqa: F401
