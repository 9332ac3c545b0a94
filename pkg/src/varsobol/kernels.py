"""Backend selection for the hot loops.

The compiled extension is used when it imports cleanly; otherwise the numpy
fallback is used. Setting ``VARSOBOL_PURE_PYTHON=1`` forces the fallback.
"""

import os

import numpy as np

from . import _fallback

if os.environ.get("VARSOBOL_PURE_PYTHON"):
    _impl = _fallback
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl

        BACKEND = "compiled"
    except ImportError:
        _impl = _fallback
        BACKEND = "python"


def _terms(alpha, pairs, beta, triples, gamma):
    return (
        np.ascontiguousarray(alpha, dtype=np.float64),
        np.ascontiguousarray(np.reshape(pairs, (-1, 2)), dtype=np.intc),
        np.ascontiguousarray(beta, dtype=np.float64),
        np.ascontiguousarray(np.reshape(triples, (-1, 3)), dtype=np.intc),
        np.ascontiguousarray(gamma, dtype=np.float64),
    )


def bank_eval(x, ids, impl=None):
    """Apply bank function ``ids[c]`` to column ``c`` of ``x``."""
    impl = impl or _impl
    x = np.ascontiguousarray(x, dtype=np.float64)
    return impl.bank_eval(x, np.ascontiguousarray(ids, dtype=np.intc))


def combine(F, alpha, pairs, beta, triples, gamma, impl=None):
    impl = impl or _impl
    F = np.ascontiguousarray(F, dtype=np.float64)
    return impl.combine(F, *_terms(alpha, pairs, beta, triples, gamma))


def combine_ab(FA, FB, alpha, pairs, beta, triples, gamma, impl=None):
    impl = impl or _impl
    FA = np.ascontiguousarray(FA, dtype=np.float64)
    FB = np.ascontiguousarray(FB, dtype=np.float64)
    return impl.combine_ab(FA, FB, *_terms(alpha, pairs, beta, triples, gamma))


def combine_star(Fc, Fg, cpos, alpha, pairs, beta, triples, gamma, impl=None):
    impl = impl or _impl
    return impl.combine_star(
        np.ascontiguousarray(Fc, dtype=np.float64),
        np.ascontiguousarray(Fg, dtype=np.float64),
        np.ascontiguousarray(cpos, dtype=np.intc),
        *_terms(alpha, pairs, beta, triples, gamma),
    )


def section_stats(y, sections, max_lag, impl=None):
    impl = impl or _impl
    return impl.section_stats(
        np.ascontiguousarray(y, dtype=np.float64),
        np.ascontiguousarray(sections, dtype=np.int64),
        int(max_lag),
    )
