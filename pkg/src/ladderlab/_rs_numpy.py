"""Pure numpy fallback for the Riemann-Siegel kernel.

Same arithmetic as the compiled kernel in ``_rs_kernel.pyx``, vectorised over
heights with a Python loop over the main-sum index.
"""

import numpy as np

TWO_PI = 2.0 * np.pi


def _theta(t):
    return 0.5 * t * np.log(t / TWO_PI) - 0.5 * t - np.pi / 8.0 + 1.0 / (48.0 * t) + 7.0 / (5760.0 * t**3)


def hardy_z_many(t, coeffs, lengths, order):
    t = np.asarray(t, dtype=np.float64)
    a = np.sqrt(t / TWO_PI)
    big_n = np.floor(a).astype(np.int64)
    p = a - big_n
    th = _theta(t)

    s = np.zeros_like(t)
    nmax = int(big_n.max()) if t.size else 0
    for n in range(1, nmax + 1):
        active = big_n >= n
        term = np.cos(th - t * np.log(float(n))) * (1.0 / np.sqrt(float(n)))
        s = s + np.where(active, term, 0.0)

    z = p - 0.5
    ainv = 1.0 / a
    pw = [np.ones_like(t)]
    for _ in range(order):
        pw.append(pw[-1] * ainv)
    width = int(max(lengths[: order + 1]))
    rem = np.zeros_like(t)
    for j in range(width - 1, -1, -1):
        bj = np.zeros_like(t)
        for k in range(order + 1):
            bj = bj + coeffs[k, j] * pw[k]
        rem = rem * z + bj
    sign = np.where(big_n % 2 == 1, 1.0, -1.0)
    return 2.0 * s + sign * (rem / np.sqrt(a))
