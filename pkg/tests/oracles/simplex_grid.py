"""Brute-force grid oracle for the optimal-weight uncertainty at small n.

Evaluates sum_s s^2 x_s - sum_l N_l^2 / D_l directly (scipy binomial pmf,
no log-space tricks) on every simplex point with coordinates on a 1/steps
lattice, and returns the smallest uncertainty found.  Independent of the
package's kernel and optimizer.  Run as a script to print the frozen table.
"""

import itertools
import math

import numpy as np
from scipy.stats import binom


def kernel(n, eta):
    # B[s, l] = P(l of s photons lost)
    return np.array([[binom.pmf(l, s, 1.0 - eta) for l in range(n + 1)] for s in range(n + 1)])


def bracket(xs, b):
    """xs: (m, n+1) weight rows."""
    s = np.arange(b.shape[0], dtype=float)
    total = xs @ (s * s)
    num = (xs * s) @ b
    den = xs @ b
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(den > 0.0, num * num / den, 0.0)
    return total - ratio.sum(axis=1)


def grid_optimum(n, eta, steps=1000):
    b = kernel(n, eta)
    best = 0.0
    if n == 1:
        a = np.arange(steps + 1) / steps
        best = bracket(np.stack([a, 1.0 - a], axis=1), b).max()
    elif n == 2:
        i, j = np.meshgrid(np.arange(steps + 1), np.arange(steps + 1), indexing="ij")
        keep = i + j <= steps
        x0, x1 = i[keep] / steps, j[keep] / steps
        best = bracket(np.stack([x0, x1, 1.0 - x0 - x1], axis=1), b).max()
    elif n == 3:
        i, j = np.meshgrid(np.arange(steps + 1), np.arange(steps + 1), indexing="ij")
        for a in range(steps + 1):
            keep = i + j <= steps - a
            x1, x2 = i[keep] / steps, j[keep] / steps
            x0 = np.full(x1.shape, a / steps)
            xs = np.stack([x0, x1, x2, 1.0 - x0 - x1 - x2], axis=1)
            best = max(best, bracket(xs, b).max())
    else:
        raise ValueError("grid oracle supports n <= 3")
    return 0.5 / math.sqrt(best)


if __name__ == "__main__":
    for n, eta in itertools.product((1, 2, 3), (0.3, 0.6, 0.9)):
        print(f"    ({n}, {eta}): {grid_optimum(n, eta)!r},")
