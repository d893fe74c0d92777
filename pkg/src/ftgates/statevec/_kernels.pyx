# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled statevector kernels; same contract as ``_kernels_py``."""

import numpy as np
cimport numpy as cnp

cnp.import_array()

BACKEND = "cython"

ctypedef double complex cplx


# Complex products are spelled out on the interleaved doubles: the C99
# complex multiply goes through a NaN-checking libcall that is several
# times slower than the arithmetic itself.


def apply_1q(cplx[::1] psi, int b, cplx m00, cplx m01, cplx m10, cplx m11):
    cdef Py_ssize_t n = psi.shape[0]
    if n == 0:
        return
    cdef double* d = <double*> &psi[0]
    cdef Py_ssize_t stride = (<Py_ssize_t>1) << b
    cdef Py_ssize_t low = stride - 1
    cdef Py_ssize_t half = n // 2
    cdef Py_ssize_t k, i0, i1
    cdef double ar, ai, br, bi
    cdef double r00 = m00.real, j00 = m00.imag, r01 = m01.real, j01 = m01.imag
    cdef double r10 = m10.real, j10 = m10.imag, r11 = m11.real, j11 = m11.imag
    with nogil:
        for k in range(half):
            i0 = 2 * (((k & ~low) << 1) | (k & low))
            i1 = i0 + 2 * stride
            ar = d[i0]
            ai = d[i0 + 1]
            br = d[i1]
            bi = d[i1 + 1]
            d[i0] = r00 * ar - j00 * ai + r01 * br - j01 * bi
            d[i0 + 1] = r00 * ai + j00 * ar + r01 * bi + j01 * br
            d[i1] = r10 * ar - j10 * ai + r11 * br - j11 * bi
            d[i1 + 1] = r10 * ai + j10 * ar + r11 * bi + j11 * br


def apply_diag_mask(cplx[::1] psi, long long mask, cplx phase):
    cdef Py_ssize_t n = psi.shape[0]
    if n == 0:
        return
    cdef double* d = <double*> &psi[0]
    cdef Py_ssize_t i
    cdef double pr = phase.real, pi = phase.imag, ar, ai
    with nogil:
        for i in range(n):
            if (i & mask) == mask:
                ar = d[2 * i]
                ai = d[2 * i + 1]
                d[2 * i] = pr * ar - pi * ai
                d[2 * i + 1] = pr * ai + pi * ar


def apply_cnot(cplx[::1] psi, int cb, int tb):
    cdef Py_ssize_t n = psi.shape[0]
    cdef Py_ssize_t cm = (<Py_ssize_t>1) << cb
    cdef Py_ssize_t tm = (<Py_ssize_t>1) << tb
    cdef Py_ssize_t lo_m = (cm if cb < tb else tm) - 1
    cdef Py_ssize_t hi_m = (tm if cb < tb else cm) - 1
    cdef Py_ssize_t k, base, i, j
    cdef cplx tmp
    with nogil:
        # visit only indices with the control set and the target clear
        for k in range(n // 4):
            base = ((k & ~lo_m) << 1) | (k & lo_m)
            base = ((base & ~hi_m) << 1) | (base & hi_m)
            i = base | cm
            j = i | tm
            tmp = psi[i]
            psi[i] = psi[j]
            psi[j] = tmp


def apply_pauli(cplx[::1] psi, long long xmask, long long zmask):
    cdef Py_ssize_t n = psi.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out_arr = np.empty(n, dtype=np.complex128)
    cdef cplx[::1] out = out_arr
    cdef Py_ssize_t i, src
    cdef long long v
    cdef int par
    with nogil:
        for i in range(n):
            src = i ^ xmask
            v = src & zmask
            par = 0
            while v:
                par ^= 1
                v &= v - 1
            if par:
                out[i] = -psi[src]
            else:
                out[i] = psi[src]
    return out_arr


def prob_one(cplx[::1] psi, int b):
    cdef Py_ssize_t n = psi.shape[0]
    cdef Py_ssize_t stride = (<Py_ssize_t>1) << b
    cdef Py_ssize_t low = stride - 1
    cdef Py_ssize_t half = n // 2
    cdef Py_ssize_t k, i
    cdef double acc = 0.0
    with nogil:
        for k in range(half):
            i = (((k & ~low) << 1) | (k & low)) + stride
            acc += psi[i].real * psi[i].real + psi[i].imag * psi[i].imag
    return acc


def collapse(cplx[::1] psi, int b, int bit, double scale):
    cdef Py_ssize_t n = psi.shape[0]
    cdef Py_ssize_t stride = (<Py_ssize_t>1) << b
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out_arr = np.empty(n // 2, dtype=np.complex128)
    if n < 2:
        return out_arr
    cdef double* src = <double*> &psi[0]
    cdef double* dst = <double*> cnp.PyArray_DATA(out_arr)
    cdef Py_ssize_t low = stride - 1
    cdef Py_ssize_t half = n // 2
    cdef Py_ssize_t k, i
    cdef Py_ssize_t off = stride if bit else 0
    with nogil:
        for k in range(half):
            i = 2 * ((((k & ~low) << 1) | (k & low)) + off)
            dst[2 * k] = src[i] * scale
            dst[2 * k + 1] = src[i + 1] * scale
    return out_arr


def append_qubit(cplx[::1] psi, cplx a0, cplx a1):
    cdef Py_ssize_t n = psi.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out_arr = np.empty(2 * n, dtype=np.complex128)
    if n == 0:
        return out_arr
    cdef double* src = <double*> &psi[0]
    cdef double* dst = <double*> cnp.PyArray_DATA(out_arr)
    cdef double r0 = a0.real, j0 = a0.imag, r1 = a1.real, j1 = a1.imag, ar, ai
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            ar = src[2 * i]
            ai = src[2 * i + 1]
            dst[4 * i] = r0 * ar - j0 * ai
            dst[4 * i + 1] = r0 * ai + j0 * ar
            dst[4 * i + 2] = r1 * ar - j1 * ai
            dst[4 * i + 3] = r1 * ai + j1 * ar
    return out_arr


def norm_sq(cplx[::1] psi):
    cdef Py_ssize_t n = psi.shape[0]
    cdef Py_ssize_t i
    cdef double acc = 0.0
    with nogil:
        for i in range(n):
            acc += psi[i].real * psi[i].real + psi[i].imag * psi[i].imag
    return acc
