# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for small dense state vectors.

Same signatures and conventions as ``_kernels_py``: big-endian qubit order,
Bell rows ordered PhiPlus, PhiMinus, PsiPlus, PsiMinus.
"""
import numpy as np
cimport numpy as cnp

cnp.import_array()

cdef double _S = 0.7071067811865475244


def apply_gate(amps, int n, int target, gate):
    cdef const double complex[::1] a = np.ascontiguousarray(amps, dtype=np.complex128)
    g_arr = np.ascontiguousarray(gate, dtype=np.complex128)
    cdef double complex g00 = g_arr[0, 0]
    cdef double complex g01 = g_arr[0, 1]
    cdef double complex g10 = g_arr[1, 0]
    cdef double complex g11 = g_arr[1, 1]
    cdef Py_ssize_t dim = a.shape[0]
    out_arr = np.empty(dim, dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    cdef Py_ssize_t mask = (<Py_ssize_t>1) << (n - 1 - target)
    cdef Py_ssize_t i, j
    cdef double complex x0, x1
    for i in range(dim):
        if i & mask:
            continue
        j = i | mask
        x0 = a[i]
        x1 = a[j]
        out[i] = g00 * x0 + g01 * x1
        out[j] = g10 * x0 + g11 * x1
    return out_arr


def bell_project(amps, int n, int q0, int q1):
    cdef const double complex[::1] a = np.ascontiguousarray(amps, dtype=np.complex128)
    cdef Py_ssize_t rest = (<Py_ssize_t>1) << (n - 2)
    out_arr = np.empty((4, rest), dtype=np.complex128)
    cdef double complex[:, ::1] out = out_arr
    cdef Py_ssize_t m0 = (<Py_ssize_t>1) << (n - 1 - q0)
    cdef Py_ssize_t m1 = (<Py_ssize_t>1) << (n - 1 - q1)
    cdef Py_ssize_t r, base, bit, k, src
    cdef int q
    cdef double complex a00, a01, a10, a11
    for r in range(rest):
        # scatter the n-2 bits of r onto the unmeasured qubit positions
        base = 0
        k = n - 3
        for q in range(n):
            if q == q0 or q == q1:
                continue
            bit = (r >> k) & 1
            base |= bit << (n - 1 - q)
            k -= 1
        a00 = a[base]
        a01 = a[base | m1]
        a10 = a[base | m0]
        a11 = a[base | m0 | m1]
        out[0, r] = _S * (a00 + a11)
        out[1, r] = _S * (a00 - a11)
        out[2, r] = _S * (a01 + a10)
        out[3, r] = _S * (a01 - a10)
    return out_arr


cdef inline void _bell4(double complex* v) nogil:
    cdef double complex a00 = v[0], a01 = v[1], a10 = v[2], a11 = v[3]
    v[0] = _S * (a00 + a11)
    v[1] = _S * (a00 - a11)
    v[2] = _S * (a01 + a10)
    v[3] = _S * (a01 - a10)


def bell_table3(amps, pairs):
    cdef const double complex[::1] a = np.ascontiguousarray(amps, dtype=np.complex128)
    cdef int p[6]
    cdef int idx = 0
    for pair in pairs:
        p[idx] = pair[0]
        p[idx + 1] = pair[1]
        idx += 2
    cdef double complex t[64]
    cdef double complex v[4]
    cdef int i, j, k, src, slot, s
    # gather into t[(pair0 bits)(pair1 bits)(pair2 bits)]
    for slot in range(64):
        src = 0
        for s in range(6):
            if (slot >> (5 - s)) & 1:
                src |= 1 << (5 - p[s])
        t[slot] = a[src]
    # Bell transform along each pair axis
    for i in range(16):
        # axis 2: contiguous blocks of 4
        for k in range(4):
            v[k] = t[4 * i + k]
        _bell4(v)
        for k in range(4):
            t[4 * i + k] = v[k]
    for i in range(4):
        for k in range(4):
            for j in range(4):
                v[j] = t[16 * i + 4 * j + k]
            _bell4(v)
            for j in range(4):
                t[16 * i + 4 * j + k] = v[j]
    for j in range(16):
        for i in range(4):
            v[i] = t[16 * i + j]
        _bell4(v)
        for i in range(4):
            t[16 * i + j] = v[i]
    out_arr = np.empty((4, 4, 4), dtype=np.float64)
    cdef double[:, :, ::1] out = out_arr
    cdef double complex z
    for i in range(4):
        for j in range(4):
            for k in range(4):
                z = t[16 * i + 4 * j + k]
                out[i, j, k] = z.real * z.real + z.imag * z.imag
    return out_arr
