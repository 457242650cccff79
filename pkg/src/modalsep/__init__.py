"""Decide and witness modal (in)distinguishability of finite Kripke models and classes.

The sklearn-style wrappers live in :mod:`modalsep.estimators` and are not
imported here, so the core library does not pull in scikit-learn.
"""

from .errors import (IllegalMoveError, ModalSepError, ParseError, ResourceCapError,
                     UnknownAtomError, ValidationError)
from .syntax import *  # noqa: F401,F403
from .kripke import *  # noqa: F401,F403
from .semantics import *  # noqa: F401,F403
from .bisim import *  # noqa: F401,F403
from .classes import *  # noqa: F401,F403
from .oracle import *  # noqa: F401,F403
from .games import *  # noqa: F401,F403
from . import syntax, kripke, semantics, bisim, classes, oracle, games

__version__ = "0.1.0"

__all__ = (
    ["ModalSepError", "ParseError", "ValidationError", "UnknownAtomError",
     "ResourceCapError", "IllegalMoveError", "__version__"]
    + syntax.__all__ + kripke.__all__ + semantics.__all__ + bisim.__all__
    + classes.__all__ + oracle.__all__ + games.__all__
)
