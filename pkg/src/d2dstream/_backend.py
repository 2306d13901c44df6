"""Pick the compiled kernels when they are importable.

Set ``D2DSTREAM_PURE_PYTHON=1`` to force the pure-Python fallback.
"""
import os

from . import _pycore

core = _pycore
COMPILED = False

if not os.environ.get("D2DSTREAM_PURE_PYTHON"):
    try:
        from . import _core
    except ImportError:  # extension not built
        pass
    else:
        core = _core
        COMPILED = True

NAME = "cython" if COMPILED else "python"
