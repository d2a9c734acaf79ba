"""Kernel backend selection.

The compiled extension is preferred when it imports cleanly; otherwise the
numpy fallback in :mod:`wordgroups._kernels.pykernels` is used.  Setting the
environment variable ``WORDGROUPS_PURE_PYTHON`` (to any non-empty value)
forces the fallback, which is handy for benchmarking and debugging.
"""

import os

__all__ = ["BACKEND", "count_windows", "train_stream", "classify_stream"]

if os.environ.get("WORDGROUPS_PURE_PYTHON"):
    from wordgroups._kernels.pykernels import (classify_stream, count_windows,
                                               train_stream)
    BACKEND = "python"
else:
    try:
        from wordgroups._kernels._speedups import (classify_stream,
                                                   count_windows, train_stream)
        BACKEND = "c"
    except ImportError:
        from wordgroups._kernels.pykernels import (classify_stream,
                                                   count_windows, train_stream)
        BACKEND = "python"
