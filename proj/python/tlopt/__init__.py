"""Temporal logic toolkit: STL/MTL/wSTL parsing, robustness semantics, and
MILP-based trajectory/control synthesis with a built-in solver."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__ as _core_doc

__all__ = [name for name in dir() if not name.startswith("_")]
__doc__ = _core_doc
