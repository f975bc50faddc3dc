# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled coalition-counting kernel.

Walks the 2^n sign assignments of ``weights`` in binary-reflected Gray-code
order (one add/subtract per step), refreshing the running sum from scratch
every 2^20 steps to bound float drift.  Semantics match twotier._pure
exactly: identical update order, identical refresh points, plain IEEE
double comparisons at the window boundaries.  Releases the GIL, so callers
may fan out over states with threads.
"""


def count_in_window(const double[::1] weights, double lo, double hi):
    """Number of sign assignments chi in {-1,+1}^n with lo < sum(w*chi) <= hi."""
    cdef Py_ssize_t n = weights.shape[0]
    if n > 40:
        raise ValueError("enumeration over 2^n sign assignments: n too large")
    cdef unsigned long long total = (<unsigned long long>1) << n
    cdef unsigned long long i, mask = 0, bit
    cdef long long hits = 0
    cdef Py_ssize_t k, b
    cdef double z = 0.0
    with nogil:
        for k in range(n):
            z -= weights[k]
        if lo < z and z <= hi:
            hits += 1
        for i in range(1, total):
            b = 0
            while ((i >> b) & 1) == 0:
                b += 1
            bit = (<unsigned long long>1) << b
            mask ^= bit
            if mask & bit:
                z += 2.0 * weights[b]
            else:
                z -= 2.0 * weights[b]
            if (i & 0xFFFFF) == 0:
                z = 0.0
                for k in range(n):
                    if (mask >> k) & 1:
                        z += weights[k]
                    else:
                        z -= weights[k]
            if lo < z and z <= hi:
                hits += 1
    return hits
