"""Bracketed scalar root finding and golden-section minimization."""

from __future__ import annotations

import math

import numpy as np
from scipy.optimize import bisect

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def bisect_root(f, lo: float, hi: float, xtol: float = 1e-12) -> float:
    """Root of ``f`` in [lo, hi]; the bracket must change sign."""
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0.0:
        raise ValueError(f"no sign change on [{lo}, {hi}]: f = {flo}, {fhi}")
    return bisect(f, lo, hi, xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=500)


def golden_section_min(f, lo: float, hi: float, tol: float = 1e-8,
                       max_iter: int = 500) -> tuple[float, float]:
    """Minimize a unimodal ``f`` on [lo, hi]. Returns ``(argmin, f(argmin))``."""
    a, b = float(lo), float(hi)
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if abs(b - a) <= tol:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    x = c if fc < fd else d
    fx = min(fc, fd)
    # a monotone f pushes the minimum onto an endpoint
    for edge in (lo, hi):
        fe = f(edge)
        if fe < fx:
            x, fx = edge, fe
    return x, fx


def golden_section_min_vec(f, lo: np.ndarray, hi: np.ndarray, tol: float = 1e-10,
                           max_iter: int = 200) -> np.ndarray:
    """Elementwise golden-section minimization of ``f(x) -> array``.

    ``f`` maps an array of abscissae (one per problem) to an array of values.
    Every problem runs the same number of iterations, so the result depends
    only on the inputs and not on how the problems are batched.
    """
    a = np.array(lo, dtype=float)
    b = np.array(hi, dtype=float)
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    width = np.max(b - a) if a.size else 0.0
    n_iter = 0
    if width > tol:
        n_iter = min(max_iter, int(math.ceil(math.log(tol / width) / math.log(INV_PHI))))
    for _ in range(n_iter):
        left = fc < fd
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        new_c = b - INV_PHI * (b - a)
        new_d = a + INV_PHI * (b - a)
        c_next = np.where(left, new_c, d)
        d_next = np.where(left, c, new_d)
        fc_next = np.where(left, np.nan, fd)
        fd_next = np.where(left, fc, np.nan)
        # evaluate only the fresh point of each problem
        fresh = np.where(left, c_next, d_next)
        f_fresh = f(fresh)
        fc = np.where(left, f_fresh, fc_next)
        fd = np.where(left, fd_next, f_fresh)
        c, d = c_next, d_next
    return np.where(fc < fd, c, d)
