"""Select the term-map kernel at import time.

The compiled extension is used when it was built; otherwise, or when the
environment variable ``POISSONLIFT_PURE`` is set to a non-empty value, the
pure-Python implementation is used.  Both expose the same functions.
"""

import os

if os.environ.get("POISSONLIFT_PURE"):
    from . import _pykernel as _impl
    BACKEND = "python"
else:
    try:
        from . import _ckernel as _impl
        BACKEND = "cython"
    except ImportError:  # extension not built
        from . import _pykernel as _impl
        BACKEND = "python"

add = _impl.add
sub = _impl.sub
neg = _impl.neg
scale = _impl.scale
mul = _impl.mul
mul_term = _impl.mul_term
diff = _impl.diff

__all__ = ["BACKEND", "add", "sub", "neg", "scale", "mul", "mul_term", "diff"]
