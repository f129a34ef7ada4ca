"""Batched per-unit least squares shared by the first stage and the
noise-variance plug-in."""

from __future__ import annotations

import numpy as np

from .exceptions import ValidationError


def design_from_panel(panel) -> tuple[np.ndarray, np.ndarray]:
    """Stack the per-unit design [1, extra regressors..., z] and outcomes.

    Returns (y, X) with shapes (n, t) and (n, t, k); the coefficient of
    interest is always the last column (on z).
    """
    y = np.asarray(panel.y, dtype=np.float64)
    z = np.asarray(panel.z, dtype=np.float64)
    n, t = y.shape
    cols = [np.ones((n, t))]
    if panel.x is not None:
        x = np.asarray(panel.x, dtype=np.float64)
        if x.ndim == 2:
            x = x[:, :, None]
        cols.extend(x[:, :, j] for j in range(x.shape[2]))
    cols.append(z)
    return y, np.stack(cols, axis=2)


def batched_unit_ols(y: np.ndarray, X: np.ndarray):
    """Unit-wise OLS of y on X across all units at once.

    Returns (coef, var_last, ok): coefficient vectors (n, k), the
    homoskedastic sampling variance of the last coefficient (n,), and a
    mask of units whose design has full rank.  Entries of failed units
    are NaN.  Needs t >= k + 1 so the residual variance is defined.
    """
    n, t = y.shape
    k = X.shape[2]
    if t < k + 1:
        raise ValidationError(f"need t >= {k + 1} periods for {k} regressors, got t={t}")
    xtx = np.einsum("ntk,ntm->nkm", X, X)
    xty = np.einsum("ntk,nt->nk", X, y)
    ok = np.linalg.matrix_rank(xtx) == k

    coef = np.full((n, k), np.nan)
    var_last = np.full(n, np.nan)
    if np.any(ok):
        inv = np.linalg.inv(xtx[ok])
        coef[ok] = np.einsum("nkm,nm->nk", inv, xty[ok])
        resid = y[ok] - np.einsum("ntk,nk->nt", X[ok], coef[ok])
        s2 = np.sum(resid ** 2, axis=1) / (t - k)
        var_last[ok] = s2 * inv[:, k - 1, k - 1]
    return coef, var_last, ok
