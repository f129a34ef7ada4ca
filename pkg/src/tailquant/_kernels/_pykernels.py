"""Pure-numpy implementations of the hot kernels (fallback backend)."""

import numpy as np

_SQRT_2PI = float(np.sqrt(2.0 * np.pi))


def descending_order_stats(values, ranks):
    """Per-row order statistics at the given descending ranks.

    values : (S, b) float64, one subsample per row.
    ranks  : (m,) int64 descending ranks, 0 = row maximum.
    Returns (S, m) with out[s, j] = ranks[j]-th largest entry of row s.
    """
    b = values.shape[1]
    positions = b - 1 - ranks  # ascending positions
    kth = np.unique(positions)
    part = np.partition(values, kth, axis=1)
    return part[:, positions]


def limit_ratio_from_exponentials(exps, gamma, r, q, l):
    """Ratio-statistic draws from iid standard exponential partial sums.

    exps : (n, m) float64 with m >= max(r, q) + 1; one draw per row.
    Returns the n ratio realizations for tail index ``gamma`` and tuning
    (r, q, l); the gamma = 0 branch uses the log form.
    """
    m = max(r, q) + 1
    sums = np.cumsum(exps[:, :m], axis=1)
    s_r = sums[:, r]
    s_q = sums[:, q]
    e_1 = exps[:, 0]
    if gamma == 0.0:
        num = np.log(s_r) - np.log(l)
        den = np.log(s_q) - np.log(e_1)
    else:
        l_pow = 0.0 if l == 0.0 else l ** (-gamma)
        num = s_r ** (-gamma) - l_pow
        den = s_q ** (-gamma) - e_1 ** (-gamma)
    return num / den


def gaussian_kernel_bias_sums(values, sigma2, centers, h):
    """Row-wise sum of sigma2_i * K'((v_i - center)/h) for the Gaussian kernel.

    values, sigma2 : (B, N) float64; centers : (B,) float64.
    K is the standard normal density, so K'(u) = -u * phi(u).
    """
    u = (values - centers[:, None]) / h
    kprime = -u * np.exp(-0.5 * u * u) / _SQRT_2PI
    return np.sum(sigma2 * kprime, axis=1)
