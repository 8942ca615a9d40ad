"""Independent reference computations used by the tests.

Nothing here imports the package's solver paths; each oracle works from the
defining formula only (grid search, bisection, brute-force loops).
"""

from __future__ import annotations

import math

import numpy as np

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def cauchy_objective(z, x, lam, gamma):
    return (z - x) ** 2 - lam * np.log(gamma / (np.pi * (gamma ** 2 + z ** 2)))


def golden_section(f, a, b, iters=120):
    """Vectorized golden-section minimization on brackets ``[a, b]``."""
    a = np.array(a, dtype=float)
    b = np.array(b, dtype=float)
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        left = fc < fd
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        new_c = b - INV_PHI * (b - a)
        new_d = a + INV_PHI * (b - a)
        c_keep, d_keep = np.where(left, new_c, d), np.where(left, c, new_d)
        fc_new = f(c_keep)
        fd_new = f(d_keep)
        c, d = c_keep, d_keep
        fc, fd = fc_new, fd_new
    return (a + b) / 2.0


def prox_argmin_oracle(xs, lam, gamma, n_uniform=4001, n_log=600):
    """Global minimizer of the Cauchy proximal objective for each x.

    Dense uniform grid over a padded interval containing 0 and x, plus
    log-spaced points near the origin where the well of width ~gamma sits;
    every discrete local minimum is refined by golden-section search.
    """
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    out = np.empty_like(xs)
    for i, x in enumerate(xs):
        lo, hi = min(0.0, x) - 1.0, max(0.0, x) + 1.0
        near = np.logspace(-14, math.log10(abs(x) + 1.0), n_log)
        grid = np.unique(np.concatenate([np.linspace(lo, hi, n_uniform), near, -near, [0.0]]))
        grid = grid[(grid >= lo) & (grid <= hi)]
        f = cauchy_objective(grid, x, lam, gamma)
        interior = np.flatnonzero((f[1:-1] <= f[:-2]) & (f[1:-1] <= f[2:])) + 1
        if interior.size == 0:
            interior = np.array([int(np.argmin(f))]).clip(1, grid.size - 2)
        a, b = grid[interior - 1], grid[interior + 1]
        zs = golden_section(lambda z: cauchy_objective(z, x, lam, gamma), a, b)
        vals = cauchy_objective(zs, x, lam, gamma)
        out[i] = zs[int(np.argmin(vals))]
    return out


def dense_grid_argmin(x, lam, gamma, lo=-4.0, hi=4.0, step=1e-5):
    """Brute grid search at a fixed step, then a local golden-section polish."""
    grid = np.arange(lo, hi + step / 2, step)
    f = cauchy_objective(grid, x, lam, gamma)
    i = int(np.argmin(f))
    a, b = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
    return float(golden_section(lambda z: cauchy_objective(z, x, lam, gamma), [a], [b])[0])


def bisection_roots(coeffs, lo=-10.0, hi=10.0, step=1e-4, tol=1e-14):
    """Real roots of a polynomial found by sign changes on a dense grid."""
    poly = np.poly1d(coeffs)
    grid = np.arange(lo, hi + step / 2, step)
    vals = poly(grid)
    roots = list(grid[vals == 0.0])
    idx = np.flatnonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)
    for i in idx:
        a, b = grid[i], grid[i + 1]
        fa = poly(a)
        while b - a > tol:
            m = 0.5 * (a + b)
            fm = poly(m)
            if np.sign(fm) == np.sign(fa):
                a, fa = m, fm
            else:
                b = m
        roots.append(0.5 * (a + b))
    return sorted(roots)


def naive_matvec(matrix, vec):
    m, n = len(matrix), len(matrix[0])
    out = [0.0] * m
    for i in range(m):
        acc = 0.0
        for j in range(n):
            acc += matrix[i][j] * vec[j]
        out[i] = acc
    return np.array(out)


def finite_difference_grad(f, x, h=1e-6):
    g = np.zeros_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        g[i] = (f(x + e) - f(x - e)) / (2 * h)
    return g
