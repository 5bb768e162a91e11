# cython: boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled batch kernel for the constellation search.

Same accumulation order as the NumPy kernel; compiled with FMA
contraction disabled (see setup.py) so results stay bit-identical.
"""

import numpy as np

cimport numpy as cnp
from libc.stdlib cimport free, malloc

cnp.import_array()


def eval_block(const cnp.uint8_t[:, ::1] d_block,
               const cnp.int64_t[:, ::1] shifts,
               const cnp.float64_t[:, ::1] table,
               const cnp.float64_t[:, ::1] corr):
    """Normalized variances for a block of ratio-digit rows.

    Arguments and result match search_numpy.eval_block.
    """
    cdef Py_ssize_t b = d_block.shape[0]
    cdef Py_ssize_t n = d_block.shape[1]
    out_arr = np.empty(b, dtype=np.float64)
    cdef cnp.float64_t[::1] out = out_arr
    cdef double* w = <double*> malloc(n * sizeof(double))
    if w == NULL:
        raise MemoryError()
    cdef Py_ssize_t i, r, m, p, q
    cdef double acc, wp
    cdef double cases = <double> (n * n)
    try:
        with nogil:
            for i in range(b):
                for m in range(n):
                    w[m] = 0.0
                for r in range(n):
                    for m in range(n):
                        w[m] = w[m] + table[d_block[i, r], shifts[r, m]]
                acc = 0.0
                for p in range(n):
                    wp = w[p]
                    for q in range(n):
                        acc = acc + (wp * corr[p, q]) * w[q]
                out[i] = acc / cases
    finally:
        free(w)
    return out_arr
