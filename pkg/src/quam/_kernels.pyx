# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled statevector kernels. Every routine mutates ``state`` in place."""
import numpy as np
cimport numpy as cnp

ctypedef double complex cplx


def controlled_swap(cplx[::1] state, int num_qubits, Py_ssize_t ctrl_mask,
                    Py_ssize_t ctrl_value, int target):
    cdef Py_ssize_t half = (<Py_ssize_t>1) << (num_qubits - 1)
    cdef Py_ssize_t tbit = (<Py_ssize_t>1) << target
    cdef Py_ssize_t low = tbit - 1
    cdef Py_ssize_t j, i0, i1
    cdef cplx tmp
    with nogil:
        for j in range(half):
            i0 = ((j & ~low) << 1) | (j & low)
            if (i0 & ctrl_mask) != ctrl_value:
                continue
            i1 = i0 | tbit
            tmp = state[i0]
            state[i0] = state[i1]
            state[i1] = tmp


def controlled_unitary(cplx[::1] state, int num_qubits, Py_ssize_t ctrl_mask,
                       Py_ssize_t ctrl_value, int target,
                       cplx u00, cplx u01, cplx u10, cplx u11):
    cdef Py_ssize_t half = (<Py_ssize_t>1) << (num_qubits - 1)
    cdef Py_ssize_t tbit = (<Py_ssize_t>1) << target
    cdef Py_ssize_t low = tbit - 1
    cdef Py_ssize_t j, i0, i1
    cdef cplx a0, a1
    with nogil:
        for j in range(half):
            i0 = ((j & ~low) << 1) | (j & low)
            if (i0 & ctrl_mask) != ctrl_value:
                continue
            i1 = i0 | tbit
            a0 = state[i0]
            a1 = state[i1]
            state[i0] = u00 * a0 + u01 * a1
            state[i1] = u10 * a0 + u11 * a1


def negate(cplx[::1] state, cnp.int64_t[::1] indices):
    cdef Py_ssize_t j
    with nogil:
        for j in range(indices.shape[0]):
            state[indices[j]] = -state[indices[j]]


def diffuse(cplx[::1] state, int num_qubits, Py_ssize_t sub_mask):
    cdef Py_ssize_t n = (<Py_ssize_t>1) << num_qubits
    cdef Py_ssize_t rest = ~sub_mask & (n - 1)
    cdef Py_ssize_t i, key, size = 1
    cdef double scale, re = 0.0, im = 0.0
    cdef double[::1] sre, sim
    cdef double *raw = <double *> &state[0]
    for i in range(num_qubits):
        if (sub_mask >> i) & 1:
            size <<= 1
    scale = 2.0 / size
    if rest == 0:
        # one coset: a register-held sum avoids a store/load chain
        with nogil:
            for i in range(n):
                re += raw[2 * i]
                im += raw[2 * i + 1]
            re *= scale
            im *= scale
            for i in range(n):
                raw[2 * i] -= re
                raw[2 * i + 1] -= im
        return
    sre = np.zeros(n, dtype=np.float64)
    sim = np.zeros(n, dtype=np.float64)
    with nogil:
        for i in range(n):
            key = i & rest
            sre[key] += raw[2 * i]
            sim[key] += raw[2 * i + 1]
        for i in range(n):
            key = i & rest
            raw[2 * i] -= scale * sre[key]
            raw[2 * i + 1] -= scale * sim[key]
