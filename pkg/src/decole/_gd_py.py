"""Numpy implementation of the logistic-regression gradient-descent kernel.

Reference semantics for the compiled kernel in ``_gd_cy.pyx``: same
objective, same update rule, same stopping conditions. The two differ only
in floating-point summation order, so results agree to tight tolerance but
not bit-for-bit.

Objective (intercept unpenalized):

    f(w, b) = mean_i[ softplus(z_i) - y_i * z_i ] + 0.5 * l2 * ||w||^2,
    z_i = x_i . w + b
"""

import numpy as np

STATUS_CONVERGED = 0
STATUS_MAX_ITER = 1
STATUS_STALLED = 2
STATUS_NON_FINITE = 3

_ARMIJO_C1 = 1e-4
_STEP_GROWTH = 2.0
_STEP_MAX = 1e12
_STEP_MIN = 1e-20


def logistic_loss(X, y, w, b, l2):
    z = X @ w + b
    softplus = np.maximum(z, 0.0) + np.log1p(np.exp(-np.abs(z)))
    return float(np.mean(softplus - y * z) + 0.5 * l2 * np.dot(w, w))


def logistic_loss_grad(X, y, w, b, l2):
    n = X.shape[0]
    z = X @ w + b
    softplus = np.maximum(z, 0.0) + np.log1p(np.exp(-np.abs(z)))
    p = 1.0 / (1.0 + np.exp(-z))
    r = p - y
    loss = float(np.mean(softplus - y * z) + 0.5 * l2 * np.dot(w, w))
    grad_w = X.T @ r / n + l2 * w
    grad_b = float(np.mean(r))
    return loss, grad_w, grad_b


def fit_gd(X, y, l2, tol, max_iter):
    """Full-batch gradient descent with backtracking (Armijo) line search.

    Starts from zero parameters; the accepted step size is doubled for the
    next iteration, so flat, weakly regularized regions are crossed in few
    iterations. Stops when the gradient infinity-norm (over weights and
    intercept jointly) drops to ``tol``.

    Returns ``(w, b, n_iter, status)`` with status one of the STATUS_*
    constants; deterministic for fixed inputs.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    w = np.zeros(X.shape[1], dtype=np.float64)
    b = 0.0
    loss, grad_w, grad_b = logistic_loss_grad(X, y, w, b, l2)
    step = 1.0
    for it in range(1, max_iter + 1):
        if not np.isfinite(loss):
            return w, b, it - 1, STATUS_NON_FINITE
        gnorm = max(float(np.max(np.abs(grad_w))) if grad_w.size else 0.0, abs(grad_b))
        if gnorm <= tol:
            return w, b, it - 1, STATUS_CONVERGED
        gsq = float(np.dot(grad_w, grad_w)) + grad_b * grad_b
        while True:
            w_new = w - step * grad_w
            b_new = b - step * grad_b
            loss_new = logistic_loss(X, y, w_new, b_new, l2)
            if np.isfinite(loss_new) and loss_new <= loss - _ARMIJO_C1 * step * gsq:
                break
            step *= 0.5
            if step < _STEP_MIN:
                return w, b, it, STATUS_STALLED
        w, b = w_new, b_new
        loss, grad_w, grad_b = logistic_loss_grad(X, y, w, b, l2)
        step = min(step * _STEP_GROWTH, _STEP_MAX)
    return w, b, max_iter, STATUS_MAX_ITER
