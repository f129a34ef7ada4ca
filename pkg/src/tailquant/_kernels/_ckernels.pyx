# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled implementations of the hot kernels.

Same contracts as ``_pykernels``; selected at import time by the package.
"""

from libc.math cimport exp, log, sqrt
from libc.stdlib cimport free, malloc

import numpy as np

cdef double SQRT_2PI = sqrt(2.0 * 3.14159265358979323846)


cdef inline void _insertion_sort(double* a, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef double v
    for i in range(1, n):
        v = a[i]
        j = i - 1
        while j >= 0 and a[j] > v:
            a[j + 1] = a[j]
            j -= 1
        a[j + 1] = v


cdef void _quicksort(double* a, Py_ssize_t n) noexcept nogil:
    # median-of-three quicksort with Hoare partition, recursing on the
    # smaller side; float comparisons only, no libc callback overhead
    cdef double pivot, tmp
    cdef Py_ssize_t i, j, mid
    while n > 24:
        mid = n >> 1
        if a[mid] < a[0]:
            tmp = a[0]; a[0] = a[mid]; a[mid] = tmp
        if a[n - 1] < a[0]:
            tmp = a[0]; a[0] = a[n - 1]; a[n - 1] = tmp
        if a[n - 1] < a[mid]:
            tmp = a[mid]; a[mid] = a[n - 1]; a[n - 1] = tmp
        pivot = a[mid]
        i = -1
        j = n
        while True:
            i += 1
            while a[i] < pivot:
                i += 1
            j -= 1
            while a[j] > pivot:
                j -= 1
            if i >= j:
                break
            tmp = a[i]; a[i] = a[j]; a[j] = tmp
        if j + 1 <= n - (j + 1):
            _quicksort(a, j + 1)
            a += j + 1
            n -= j + 1
        else:
            _quicksort(a + j + 1, n - (j + 1))
            n = j + 1
    _insertion_sort(a, n)


def descending_order_stats(const double[:, ::1] values, const long long[::1] ranks):
    cdef Py_ssize_t n_rows = values.shape[0]
    cdef Py_ssize_t b = values.shape[1]
    cdef Py_ssize_t m = ranks.shape[0]
    cdef Py_ssize_t top = 0
    cdef Py_ssize_t s, i, j, cnt
    cdef double v
    for j in range(m):
        if ranks[j] > top:
            top = ranks[j]
    top += 1  # number of leading order statistics needed

    out = np.empty((n_rows, m), dtype=np.float64)
    cdef double[:, ::1] ov = out
    cdef bint select = top <= 64 or top * 16 <= b
    cdef Py_ssize_t buf_len = top if select else b
    cdef double* buf = <double*> malloc(buf_len * sizeof(double))
    if buf == NULL:
        raise MemoryError()
    try:
        with nogil:
            if select:
                # one linear scan per row keeping the top values sorted descending
                for s in range(n_rows):
                    cnt = 0
                    for i in range(b):
                        v = values[s, i]
                        if cnt < top:
                            j = cnt
                            while j > 0 and buf[j - 1] < v:
                                buf[j] = buf[j - 1]
                                j -= 1
                            buf[j] = v
                            cnt += 1
                        elif v > buf[top - 1]:
                            j = top - 1
                            while j > 0 and buf[j - 1] < v:
                                buf[j] = buf[j - 1]
                                j -= 1
                            buf[j] = v
                    for j in range(m):
                        ov[s, j] = buf[ranks[j]]
            else:
                for s in range(n_rows):
                    for i in range(b):
                        buf[i] = values[s, i]
                    _quicksort(buf, b)
                    for j in range(m):
                        ov[s, j] = buf[b - 1 - ranks[j]]
    finally:
        free(buf)
    return out


def limit_ratio_from_exponentials(const double[:, ::1] exps, double gamma,
                                  Py_ssize_t r, Py_ssize_t q, double l):
    cdef Py_ssize_t n = exps.shape[0]
    cdef Py_ssize_t m = (r if r > q else q) + 1
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] ov = out
    cdef double l_pow = 0.0
    cdef double log_l = 0.0
    cdef bint log_form = gamma == 0.0
    if log_form:
        log_l = log(l)
    elif l != 0.0:
        l_pow = exp(-gamma * log(l))
    cdef Py_ssize_t i, j
    cdef double acc, s_r, s_q, e_1, num, den
    with nogil:
        for i in range(n):
            e_1 = exps[i, 0]
            acc = 0.0
            s_r = 0.0
            s_q = 0.0
            for j in range(m):
                acc += exps[i, j]
                if j == r:
                    s_r = acc
                if j == q:
                    s_q = acc
            if log_form:
                num = log(s_r) - log_l
                den = log(s_q) - log(e_1)
            else:
                num = exp(-gamma * log(s_r)) - l_pow
                den = exp(-gamma * log(s_q)) - exp(-gamma * log(e_1))
            ov[i] = num / den
    return out


def gaussian_kernel_bias_sums(const double[:, ::1] values, const double[:, ::1] sigma2,
                              const double[::1] centers, double h):
    cdef Py_ssize_t n_rows = values.shape[0]
    cdef Py_ssize_t n_cols = values.shape[1]
    out = np.empty(n_rows, dtype=np.float64)
    cdef double[::1] ov = out
    cdef Py_ssize_t s, i
    cdef double acc, u
    with nogil:
        for s in range(n_rows):
            acc = 0.0
            for i in range(n_cols):
                u = (values[s, i] - centers[s]) / h
                acc += sigma2[s, i] * (-u * exp(-0.5 * u * u))
            ov[s] = acc / SQRT_2PI
    return out
