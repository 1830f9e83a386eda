"""Sharp time-frequency representations by synchro/transient extraction.

The heavy lifting lives in the compiled extension; this package simply
re-exports it.
"""

from ._stet import *  # noqa: F401,F403
from ._stet import __doc__  # noqa: F401
