"""Selects the enumeration kernel implementation.

The compiled extension (`_fastcore`, built from Cython) is used when it
imported cleanly; otherwise the pure Python reference (`_purecore`) takes
over.  Setting the environment variable ORTHOGRAPH_PURE=1 forces the pure
implementation even when the extension is available, which is handy for
debugging and for the benchmark.

Both modules expose the same four functions:

    pm_cycle_histogram(dart_vertex, nv)
    pm_colored_histogram(dart_vertex, dart_color, nv)
    pm_cross_histogram(dart_vertex, dart_color, nv)
    cross_rematch_table(dart_vertex, dart_color, nv, v4)

plus an IMPLEMENTATION string naming the active backend.
"""

import os

from . import _purecore


def _load():
    if os.environ.get("ORTHOGRAPH_PURE") == "1":
        return _purecore
    try:
        from . import _fastcore
        return _fastcore
    except ImportError:
        return _purecore


_impl = _load()

IMPLEMENTATION = _impl.IMPLEMENTATION
pm_cycle_histogram = _impl.pm_cycle_histogram
pm_colored_histogram = _impl.pm_colored_histogram
pm_cross_histogram = _impl.pm_cross_histogram
cross_rematch_table = _impl.cross_rematch_table
