"""Maximum-likelihood fitting of multinomial and binary logit models.

The multinomial model relates category probabilities to indicator
predictors through log-ratios against a reference category:

    log(p_ij / p_i,ref) = alpha_j + x_i' beta_j        (j != ref)

and the binary logit is the two-category special case.  Both are fitted by
full Newton-Raphson on the joint parameter system with step-halving on any
likelihood decrease, so the reported covariance is the inverse of the
observed information at the optimum rather than an IRLS approximation.

Convergence requires both a relative log-likelihood change below
``tol_ll`` and a gradient max-norm below ``tol_grad``; gradient components
pinned at the separation cap are projected out of the norm, since a capped
parameter's gradient cannot vanish.  Quasi-complete separation (empty
predictor/category cells) drives parameters to the cap and is reported via
``diagnostics.separation_suspected`` instead of failing the fit, matching
how such fits are still summarised in practice with 0.00 probability
cells.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from shuttlestats.glm.backend import get_kernels

PARAM_CAP = 30.0
MAX_ITER = 100
TOL_LL = 1e-10
TOL_GRAD = 1e-6
RIDGE = 1e-8


class FitError(RuntimeError):
    """The model could not be fitted on the given data."""


class CollinearityError(FitError):
    def __init__(self, columns: Sequence[str]):
        self.columns = tuple(columns)
        super().__init__(
            "design matrix is rank deficient; collinear columns: " + ", ".join(self.columns)
        )


class NonConvergenceError(FitError):
    """Newton iteration exhausted; carries the last iterate for diagnosis."""

    def __init__(self, message: str, last_theta: np.ndarray, iterations: int, grad_norm: float):
        self.last_theta = last_theta
        self.iterations = iterations
        self.grad_norm = grad_norm
        super().__init__(
            f"{message} (iterations={iterations}, projected gradient max-norm={grad_norm:.3e})"
        )


@dataclass(frozen=True)
class FitDiagnostics:
    iterations: int
    final_grad_norm: float
    converged: bool
    separation_suspected: bool
    ridge_used: bool
    backend: str

    def to_json(self) -> dict:
        return {
            "iterations": self.iterations,
            "final_grad_norm": self.final_grad_norm,
            "converged": self.converged,
            "separation_suspected": self.separation_suspected,
            "ridge_used": self.ridge_used,
            "backend": self.backend,
        }


def _param_labels(categories: Sequence[str | None], columns: Sequence[str]) -> tuple:
    return tuple((c, name) for c in categories for name in ("intercept", *columns))


@dataclass(frozen=True)
class MultinomialFit:
    """Fitted multinomial logit model with reference-category coding."""

    categories: tuple[str, ...]
    reference: str
    columns: tuple[str, ...]
    coef: np.ndarray  # (J-1, 1+p); rows follow non-reference category order
    cov: np.ndarray  # covariance of coef flattened row-major
    log_likelihood: float
    n_obs: int
    diagnostics: FitDiagnostics

    @property
    def nonref_categories(self) -> tuple[str, ...]:
        return tuple(c for c in self.categories if c != self.reference)

    @property
    def n_params(self) -> int:
        return self.coef.size

    @property
    def bic(self) -> float:
        return -2.0 * self.log_likelihood + self.n_params * np.log(self.n_obs)

    def param_labels(self) -> tuple:
        """(category, column) pairs in covariance order."""
        return _param_labels(self.nonref_categories, self.columns)

    def flat_params(self) -> np.ndarray:
        return self.coef.ravel()

    def intercept_of(self, category: str) -> float:
        return float(self.coef[self.nonref_categories.index(category), 0])

    def coef_of(self, category: str, column: str) -> float:
        return float(
            self.coef[self.nonref_categories.index(category), 1 + self.columns.index(column)]
        )

    def predict_proba(self, x: np.ndarray) -> np.ndarray:
        return predict_proba(self, x)


@dataclass(frozen=True)
class BinaryFit:
    """Fitted binary logit model."""

    columns: tuple[str, ...]
    intercept: float
    coef: np.ndarray  # (p,)
    cov: np.ndarray  # covariance over (intercept, *coef)
    log_likelihood: float
    n_obs: int
    diagnostics: FitDiagnostics

    @property
    def n_params(self) -> int:
        return 1 + self.coef.size

    @property
    def bic(self) -> float:
        return -2.0 * self.log_likelihood + self.n_params * np.log(self.n_obs)

    def param_labels(self) -> tuple:
        return _param_labels([None], self.columns)

    def flat_params(self) -> np.ndarray:
        return np.concatenate(([self.intercept], self.coef))

    def coef_of(self, column: str) -> float:
        return float(self.coef[self.columns.index(column)])

    def predict_proba(self, x: np.ndarray) -> float:
        eta = self.intercept + float(np.asarray(x, dtype=np.float64) @ self.coef)
        return 1.0 / (1.0 + np.exp(-eta))


def _augment(X: np.ndarray) -> np.ndarray:
    X = np.ascontiguousarray(np.asarray(X, dtype=np.float64))
    if X.ndim != 2:
        raise ValueError("X must be 2-dimensional")
    return np.ascontiguousarray(np.hstack([np.ones((X.shape[0], 1)), X]))


def _check_rank(X1: np.ndarray, columns: Sequence[str]) -> None:
    """Reject rank-deficient designs, naming the dependent columns."""
    n, q = X1.shape
    basis: list[np.ndarray] = []
    bad: list[str] = []
    labels = ("intercept", *columns)
    for k in range(q):
        col = X1[:, k]
        resid = col.copy()
        for b in basis:
            resid = resid - (b @ resid) * b
        norm = np.linalg.norm(resid)
        if norm <= 1e-8 * max(1.0, np.linalg.norm(col)):
            bad.append(labels[k])
        else:
            basis.append(resid / norm)
    if bad:
        raise CollinearityError(bad)


def _projected_grad_norm(grad: np.ndarray, theta: np.ndarray, cap: float) -> float:
    """Gradient max-norm ignoring components pushing a capped parameter outward."""
    flat = theta.ravel()
    g = grad.copy()
    g[(flat >= cap) & (g > 0)] = 0.0
    g[(flat <= -cap) & (g < 0)] = 0.0
    return float(np.max(np.abs(g))) if g.size else 0.0


def _newton(
    X1: np.ndarray,
    y: np.ndarray,
    jm1: int,
    *,
    max_iter: int,
    cap: float,
    tol_ll: float,
    tol_grad: float,
    backend: str | None,
) -> tuple[np.ndarray, np.ndarray, float, FitDiagnostics]:
    kernels = get_kernels(backend)
    n, q = X1.shape
    m = jm1 * q
    theta = np.zeros((jm1, q))
    ridge_used = False

    ll, grad, info = kernels.multinomial_ll_grad_info(X1, y, theta)
    iterations = 0
    converged = _projected_grad_norm(grad, theta, cap) < tol_grad

    while not converged and iterations < max_iter:
        iterations += 1
        try:
            delta = np.linalg.solve(info, grad)
        except np.linalg.LinAlgError:
            ridge_used = True
            delta = np.linalg.solve(info + RIDGE * np.eye(m), grad)
        if not np.all(np.isfinite(delta)):
            ridge_used = True
            delta = np.linalg.solve(info + RIDGE * np.eye(m), grad)

        step = 1.0
        accepted = False
        while step >= 1e-10:
            cand = np.clip(theta + step * delta.reshape(jm1, q), -cap, cap)
            cand = np.ascontiguousarray(cand)
            ll_new, grad_new, info_new = kernels.multinomial_ll_grad_info(X1, y, cand)
            if np.isfinite(ll_new) and ll_new >= ll - 1e-12:
                accepted = True
                break
            step *= 0.5
        if not accepted:
            raise NonConvergenceError(
                "Newton step failed to improve the log-likelihood",
                theta, iterations, _projected_grad_norm(grad, theta, cap),
            )

        delta_ll = ll_new - ll
        theta, ll, grad, info = cand, ll_new, grad_new, info_new
        if abs(delta_ll) < tol_ll * (1.0 + abs(ll)) and _projected_grad_norm(grad, theta, cap) < tol_grad:
            converged = True

    grad_norm = _projected_grad_norm(grad, theta, cap)
    if not converged:
        raise NonConvergenceError("no convergence after max iterations", theta, iterations, grad_norm)

    try:
        cov = np.linalg.inv(info)
    except np.linalg.LinAlgError:
        ridge_used = True
        cov = np.linalg.inv(info + RIDGE * np.eye(m))
    diagnostics = FitDiagnostics(
        iterations=iterations,
        final_grad_norm=grad_norm,
        converged=True,
        separation_suspected=bool(np.any(np.abs(theta) >= cap - 1e-8)),
        ridge_used=ridge_used,
        backend=kernels.BACKEND_NAME,
    )
    return theta, cov, ll, diagnostics


def fit_multinomial(
    X: np.ndarray,
    y: np.ndarray,
    categories: Sequence[str],
    reference: str,
    *,
    columns: Sequence[str] | None = None,
    max_iter: int = MAX_ITER,
    cap: float = PARAM_CAP,
    tol_ll: float = TOL_LL,
    tol_grad: float = TOL_GRAD,
    backend: str | None = None,
) -> MultinomialFit:
    """Fit the multinomial logit by Newton-Raphson maximum likelihood.

    Parameters
    ----------
    X : (n, p) array of indicator predictors (intercept added internally).
    y : (n,) integer codes into ``categories``.
    categories : declared response categories (all J of them).
    reference : the category whose linear predictor is fixed at zero.
    columns : labels for the p predictor columns.
    """
    categories = tuple(categories)
    if reference not in categories:
        raise ValueError(f"reference {reference!r} not among categories")
    X1 = _augment(X)
    n, q = X1.shape
    y = np.asarray(y, dtype=np.int64)
    if y.shape != (n,):
        raise ValueError("y length does not match X")
    if np.any((y < 0) | (y >= len(categories))):
        raise ValueError("response codes outside the declared category set")
    if n < q:
        raise FitError(f"need at least {q} observations for {q} parameters per category, got {n}")
    if len(np.unique(y)) < 2:
        raise FitError("need at least 2 observed response categories")
    columns = tuple(columns) if columns is not None else tuple(f"x{k}" for k in range(q - 1))
    if len(columns) != q - 1:
        raise ValueError("column labels do not match X")
    _check_rank(X1, columns)

    # Internal coding puts the reference category last.
    nonref = [c for c in categories if c != reference]
    order = nonref + [reference]
    recode = np.array([order.index(c) for c in categories], dtype=np.int64)
    yk = np.ascontiguousarray(recode[y])

    theta, cov, ll, diagnostics = _newton(
        X1, yk, len(categories) - 1,
        max_iter=max_iter, cap=cap, tol_ll=tol_ll, tol_grad=tol_grad, backend=backend,
    )
    return MultinomialFit(
        categories=categories,
        reference=reference,
        columns=columns,
        coef=theta,
        cov=cov,
        log_likelihood=ll,
        n_obs=n,
        diagnostics=diagnostics,
    )


def fit_logistic(
    X: np.ndarray,
    y: np.ndarray,
    *,
    columns: Sequence[str] | None = None,
    max_iter: int = MAX_ITER,
    cap: float = PARAM_CAP,
    tol_ll: float = TOL_LL,
    tol_grad: float = TOL_GRAD,
    backend: str | None = None,
) -> BinaryFit:
    """Fit the binary logit by Newton-Raphson maximum likelihood.

    ``y`` holds 0/1 responses; both classes must be present.
    """
    X1 = _augment(X)
    n, q = X1.shape
    y = np.asarray(y, dtype=np.int64)
    if y.shape != (n,):
        raise ValueError("y length does not match X")
    if np.any((y < 0) | (y > 1)):
        raise ValueError("binary responses must be coded 0/1")
    if n < q:
        raise FitError(f"need at least {q} observations for {q} parameters, got {n}")
    if len(np.unique(y)) < 2:
        raise FitError("all responses are one class; the logit MLE does not exist")
    columns = tuple(columns) if columns is not None else tuple(f"x{k}" for k in range(q - 1))
    if len(columns) != q - 1:
        raise ValueError("column labels do not match X")
    _check_rank(X1, columns)

    # Success is the non-reference category: code 1 -> 0, 0 -> reference (1).
    yk = np.ascontiguousarray(1 - y)
    theta, cov, ll, diagnostics = _newton(
        X1, yk, 1,
        max_iter=max_iter, cap=cap, tol_ll=tol_ll, tol_grad=tol_grad, backend=backend,
    )
    return BinaryFit(
        columns=columns,
        intercept=float(theta[0, 0]),
        coef=theta[0, 1:].copy(),
        cov=cov,
        log_likelihood=ll,
        n_obs=n,
        diagnostics=diagnostics,
    )


def predict_proba(fit: MultinomialFit, x: np.ndarray) -> np.ndarray:
    """Category probabilities at one indicator row, in ``fit.categories`` order.

    The reference category's linear predictor is fixed at zero and the
    softmax is evaluated with max-shifting, so the output always sums to 1.
    """
    x = np.asarray(x, dtype=np.float64).ravel()
    if x.shape != (len(fit.columns),):
        raise ValueError(f"expected {len(fit.columns)} predictor values, got {x.shape[0]}")
    eta_nonref = fit.coef[:, 0] + fit.coef[:, 1:] @ x
    eta = np.empty(len(fit.categories))
    k = 0
    for j, category in enumerate(fit.categories):
        if category == fit.reference:
            eta[j] = 0.0
        else:
            eta[j] = eta_nonref[k]
            k += 1
    expz = np.exp(eta - eta.max())
    return expz / expz.sum()
