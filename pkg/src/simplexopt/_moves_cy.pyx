# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled move-proposal kernel.

Same contract and bitwise-identical output as ``_moves_py.propose_moves``;
see that module for the semantics. Plain C loops over typed memoryviews,
no numpy C-API.
"""

import numpy as np

from ._moves_py import BOUNDARY_SLACK

cdef double SLACK = BOUNDARY_SLACK


def propose_moves(p_in, double step, double rho, double phi, double sparsity):
    p_arr = np.ascontiguousarray(p_in, dtype=np.float64)
    cdef const double[::1] p = p_arr
    cdef Py_ssize_t m = p.shape[0]

    candidates = np.zeros((2 * m, m))
    steps = np.zeros(2 * m)
    skipped = np.ones(2 * m, dtype=np.uint8)
    cdef double[:, ::1] cand = candidates
    cdef double[::1] st = steps
    cdef unsigned char[::1] sk = skipped

    cdef double inf = float("inf")
    cdef double min1 = inf, min2 = inf
    cdef Py_ssize_t i1 = -1, n_sig = 0
    cdef Py_ssize_t i, l, row, k
    cdef double v, s_loc, share, bound
    cdef bint sig_i, found

    for l in range(m):
        v = p[l]
        if v > sparsity:
            n_sig += 1
            if v < min1:
                min2 = min1
                min1 = v
                i1 = l
            elif v < min2:
                min2 = v

    if n_sig == 0 or step <= phi:
        return candidates, steps, skipped.view(np.bool_)

    for i in range(m):
        sig_i = p[i] > sparsity
        k = n_sig - (1 if sig_i else 0)
        if k < 1:
            continue

        # plus: coordinate i gains s, redistribution set loses s/k each
        bound = min2 if (sig_i and i == i1) else min1
        s_loc = step
        share = 0.0
        found = False
        while s_loc > phi:
            share = s_loc / k
            if bound - share >= -SLACK:
                found = True
                break
            s_loc = s_loc / rho
        if found:
            row = i
            for l in range(m):
                if p[l] > sparsity and l != i:
                    v = p[l] - share
                    cand[row, l] = v if v > 0.0 else 0.0
                else:
                    cand[row, l] = p[l]
            cand[row, i] = p[i] + s_loc
            st[row] = s_loc
            sk[row] = 0

        # minus: coordinate i loses s, redistribution set gains s/k each
        bound = p[i]
        s_loc = step
        found = False
        while s_loc > phi:
            if bound - s_loc >= -SLACK:
                found = True
                break
            s_loc = s_loc / rho
        if found:
            share = s_loc / k
            row = m + i
            for l in range(m):
                if p[l] > sparsity and l != i:
                    cand[row, l] = p[l] + share
                else:
                    cand[row, l] = p[l]
            v = p[i] - s_loc
            cand[row, i] = v if v > 0.0 else 0.0
            st[row] = s_loc
            sk[row] = 0

    return candidates, steps, skipped.view(np.bool_)
