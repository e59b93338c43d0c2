"""Pure-numpy likelihood kernels (fallback when the compiled core is absent).

Contract shared with the compiled twin in ``_kernels.pyx``: given the
augmented design ``X1`` (n x q, first column all ones), integer responses
``y`` coded 0..J-1 with the reference category coded J-1, and the parameter
block ``theta`` ((J-1) x q), return the multinomial log-likelihood, its
gradient, and the observed information matrix (the negated Hessian), with
parameters flattened row-major over (category, column).
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "python"


def multinomial_ll_grad_info(
    X1: np.ndarray, y: np.ndarray, theta: np.ndarray
) -> tuple[float, np.ndarray, np.ndarray]:
    n, q = X1.shape
    jm1 = theta.shape[0]

    eta = X1 @ theta.T  # (n, jm1); the reference category's predictor is 0
    shift = np.maximum(eta.max(axis=1), 0.0)
    expz = np.exp(eta - shift[:, None])
    denom = np.exp(-shift) + expz.sum(axis=1)
    prob = expz / denom[:, None]  # (n, jm1)

    is_ref = y == jm1
    eta_obs = np.where(is_ref, 0.0, eta[np.arange(n), np.minimum(y, jm1 - 1)])
    ll = float(eta_obs.sum() - (shift + np.log(denom)).sum())

    onehot = np.zeros((n, jm1))
    rows = ~is_ref
    onehot[np.nonzero(rows)[0], y[rows]] = 1.0
    grad = ((onehot - prob).T @ X1).ravel()

    m = jm1 * q
    info = np.empty((m, m))
    for a in range(jm1):
        for b in range(a, jm1):
            w = prob[:, a] * ((1.0 if a == b else 0.0) - prob[:, b])
            block = X1.T @ (w[:, None] * X1)
            info[a * q : (a + 1) * q, b * q : (b + 1) * q] = block
            if b > a:
                info[b * q : (b + 1) * q, a * q : (a + 1) * q] = block.T
    return ll, grad, info
