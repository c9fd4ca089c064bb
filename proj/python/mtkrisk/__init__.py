from ._mtkrisk import *  # noqa: F401,F403
from ._mtkrisk import __doc__  # noqa: F401

__version__ = "0.1.0"
