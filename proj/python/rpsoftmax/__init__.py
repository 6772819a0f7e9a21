from ._rpsoftmax import *  # noqa: F401,F403
from ._rpsoftmax import __version__  # noqa: F401
