"""Hot kernels: compiled extension when available, numpy fallback otherwise.

Set the environment variable WEYLCURVES_PURE=1 to force the fallback.
"""

from __future__ import annotations

import os

from . import pure

if os.environ.get("WEYLCURVES_PURE"):
    _impl = pure
else:
    try:
        from . import _speedups as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = pure

COMPILED = _impl.COMPILED

blade_sign = pure.blade_sign
sign_table = pure.sign_table

dense_mul = _impl.dense_mul
exact_mul = _impl.exact_mul
delta_signs_batch = _impl.delta_signs_batch
s_batch = _impl.s_batch
delta_word_batch = _impl.delta_word_batch
chop_batch = _impl.chop_batch
tr_batch = _impl.tr_batch
ad_batch = _impl.ad_batch
inversions_batch = _impl.inversions_batch
