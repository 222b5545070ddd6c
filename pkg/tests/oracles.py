"""Reference computations that share no code with the package.

The e-surface is written through the angle-dependent index n(theta_k)
rather than the quadratic form the library solves, and roots are found by
dense scanning followed by plain bisection.
"""

import math

import numpy as np


def e_index(k, n_o, n_e, theta):
    """n(theta_k) with 1/n^2 = cos^2/n_o^2 + sin^2/n_e^2, theta_k measured from the optic axis."""
    k = np.asarray(k, dtype=float)
    axis = np.array([math.sin(theta), 0.0, math.cos(theta)])
    cos_t = (k @ axis) / np.linalg.norm(k, axis=-1)
    return 1.0 / np.sqrt(cos_t**2 / n_o**2 + (1.0 - cos_t**2) / n_e**2)


def bisect(f, lo, hi, iters=200):
    flo = f(lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def scan_root(f_vec, f, lo, hi, points):
    """Locate the first sign change of f on a dense grid, then bisect it."""
    grid = np.linspace(lo, hi, points)
    values = f_vec(grid)
    idx = np.nonzero(np.sign(values[:-1]) != np.sign(values[1:]))[0]
    if idx.size == 0:
        raise ValueError("no sign change on the scan grid")
    i = idx[0]
    return bisect(f, grid[i], grid[i + 1])


def kz_e_oracle(k_x, k_y, k0, n_o, n_e, theta, points=10**6, sign=1.0):
    """Positive k_z on the e-surface, or the x-root when ``sign`` selects it."""
    nmax = max(n_o, n_e) * k0

    def f_vec(kz):
        k = np.column_stack([np.full_like(kz, k_x), np.full_like(kz, k_y), kz])
        return np.linalg.norm(k, axis=1) - e_index(k, n_o, n_e, theta) * k0

    def f(kz):
        return float(f_vec(np.array([kz]))[0])

    return scan_root(f_vec, f, 0.0, nmax, points)


def kx_e_oracle(k_y, k_z, k0, n_o, n_e, theta, points=10**6):
    """Negative k_x on the e-surface at fixed (k_y, k_z), returned as a magnitude."""
    nmax = max(n_o, n_e) * k0

    def f_vec(kx):
        k = np.column_stack([kx, np.full_like(kx, k_y), np.full_like(kx, k_z)])
        return np.linalg.norm(k, axis=1) - e_index(k, n_o, n_e, theta) * k0

    def f(kx):
        return float(f_vec(np.array([kx]))[0])

    # scan from the far negative end towards zero
    return -scan_root(f_vec, f, -nmax, 0.0, points)


def fock_wick(pairs, a, b):
    """|sum amp (a_m b_n + a_n b_m)|^2 for psi = sum amp b+_m b+_n |0>.

    ``pairs`` is a list of (m, n, amp); ``a`` and ``b`` map modes to the
    scalar coefficients of the two annihilation forms.  Each term follows
    from commuting both annihilators through the two creators.
    """
    total = 0j
    for m, n, amp in pairs:
        total += amp * (a.get(m, 0) * b.get(n, 0) + a.get(n, 0) * b.get(m, 0))
    return abs(total) ** 2


def kz_e_quadratic(k_x, k_y, k0, n_o, n_e, theta):
    """Forward k_z on the index ellipsoid by the quadratic formula (vectorized)."""
    s, c = math.sin(theta), math.cos(theta)
    d = 1.0 / n_o**2 - 1.0 / n_e**2
    k_x = np.asarray(k_x, dtype=float)
    k_y = np.asarray(k_y, dtype=float)
    a = 1.0 / n_e**2 + d * c * c
    b = 2.0 * d * k_x * s * c
    cc = (k_x**2 + k_y**2) / n_e**2 + d * (k_x * s) ** 2 - k0 * k0
    return (-b + np.sqrt(b * b - 4 * a * cc)) / (2 * a)


def degenerate_kyd_scan(k0, k_p, n_o, n_e, theta, points=10**5):
    """k_yd from a dense scan of k_oz(k_yd) + k_ez(-k_yd) - k_p plus bisection."""
    hi = 0.99 * min(n_o, n_e) * k0

    def f_vec(ky):
        return np.sqrt((n_o * k0) ** 2 - ky**2) + kz_e_quadratic(0.0, -ky, k0, n_o, n_e, theta) - k_p

    def f(ky):
        return float(f_vec(np.array([ky]))[0])

    return scan_root(f_vec, f, 0.0, hi, points)
