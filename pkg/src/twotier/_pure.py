"""Pure-Python coalition-counting kernel.

Fallback for :mod:`twotier._gray` when the compiled extension is not
available.  Both kernels walk the 2^n sign assignments of ``weights`` in the
same binary-reflected Gray-code order, apply one add/subtract per step, and
refresh the running sum from scratch every 2^20 steps to bound float drift;
the two therefore produce bitwise-identical running sums and identical hit
counts.  Roughly 100x slower than the compiled kernel; fine for n up to ~22.
"""

from __future__ import annotations

from typing import Sequence

REFRESH_MASK = (1 << 20) - 1


def count_in_window(weights: Sequence[float], lo: float, hi: float) -> int:
    """Number of sign assignments chi in {-1,+1}^n with lo < sum(w*chi) <= hi.

    Boundary comparisons are plain IEEE double comparisons, no epsilon.
    """
    w = [float(x) for x in weights]
    n = len(w)
    if n > 40:
        raise ValueError("enumeration over 2^n sign assignments: n too large")
    z = 0.0
    for x in w:
        z -= x
    hits = 1 if lo < z <= hi else 0
    mask = 0
    two = [2.0 * x for x in w]
    for i in range(1, 1 << n):
        b = (i & -i).bit_length() - 1
        bit = 1 << b
        mask ^= bit
        if mask & bit:
            z += two[b]
        else:
            z -= two[b]
        if i & REFRESH_MASK == 0:
            acc = 0.0
            for k in range(n):
                acc += w[k] if (mask >> k) & 1 else -w[k]
            z = acc
        if lo < z <= hi:
            hits += 1
    return hits
