# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled likelihood kernels for the Newton fitter.

Same contract as ``_kernels_py``: multinomial log-likelihood, gradient, and
observed information in one pass over the rows.  The per-row work (softmax
plus rank-one updates of the information matrix) is the hot loop when
fitting or refitting on large datasets, hence the compiled twin.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, log

BACKEND_NAME = "cython"


def multinomial_ll_grad_info(
    double[:, ::1] X1 not None,
    cnp.int64_t[::1] y not None,
    double[:, ::1] theta not None,
):
    cdef Py_ssize_t n = X1.shape[0]
    cdef Py_ssize_t q = X1.shape[1]
    cdef Py_ssize_t jm1 = theta.shape[0]
    cdef Py_ssize_t m = jm1 * q

    grad_arr = np.zeros(m, dtype=np.float64)
    info_arr = np.zeros((m, m), dtype=np.float64)
    eta_arr = np.empty(jm1, dtype=np.float64)
    prob_arr = np.empty(jm1, dtype=np.float64)
    cdef double[::1] grad = grad_arr
    cdef double[:, ::1] info = info_arr
    cdef double[::1] eta = eta_arr
    cdef double[::1] prob = prob_arr

    cdef double ll = 0.0
    cdef double acc, shift, denom, resid, w, xs
    cdef Py_ssize_t i, j, k, a, b, s, t, yi

    for i in range(n):
        shift = 0.0  # the reference category contributes eta = 0
        for j in range(jm1):
            acc = 0.0
            for k in range(q):
                acc += X1[i, k] * theta[j, k]
            eta[j] = acc
            if acc > shift:
                shift = acc
        denom = exp(-shift)
        for j in range(jm1):
            prob[j] = exp(eta[j] - shift)
            denom += prob[j]
        yi = y[i]
        ll += (eta[yi] if yi < jm1 else 0.0) - shift - log(denom)
        for j in range(jm1):
            prob[j] /= denom

        for j in range(jm1):
            resid = (1.0 if yi == j else 0.0) - prob[j]
            for k in range(q):
                grad[j * q + k] += resid * X1[i, k]

        # upper triangle of the observed information (symmetric, PSD)
        for a in range(jm1):
            w = prob[a] * (1.0 - prob[a])
            for s in range(q):
                xs = w * X1[i, s]
                for t in range(s, q):
                    info[a * q + s, a * q + t] += xs * X1[i, t]
            for b in range(a + 1, jm1):
                w = -prob[a] * prob[b]
                for s in range(q):
                    xs = w * X1[i, s]
                    for t in range(q):
                        info[a * q + s, b * q + t] += xs * X1[i, t]

    for s in range(m):
        for t in range(s + 1, m):
            info[t, s] = info[s, t]
    return ll, grad_arr, info_arr
