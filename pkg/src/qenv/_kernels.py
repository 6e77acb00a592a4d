"""Compiled inner loops.

Everything the multistart searches evaluate millions of times lives here:
the cyclic Jacobi eigensolver, the generator-to-unitary map, the three
search objectives and a plain Nelder-Mead. The public modules wrap these
with validation and numpy-friendly signatures.
"""

import numpy as np
from numba import njit

JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100


@njit(cache=True)
def jacobi_eigh(hr, hi, vr, vi, tol, max_sweeps):
    """Cyclic Jacobi on a Hermitian matrix split into real/imag parts.

    ``hr``/``hi`` are overwritten; on return their diagonal holds the
    eigenvalues. ``vr``/``vi`` receive the eigenvectors as columns.
    Returns the number of sweeps used, or -1 without convergence.
    """
    n = hr.shape[0]
    for i in range(n):
        for j in range(n):
            vr[i, j] = 1.0 if i == j else 0.0
            vi[i, j] = 0.0
    norm2 = 0.0
    for i in range(n):
        for j in range(n):
            norm2 += hr[i, j] * hr[i, j] + hi[i, j] * hi[i, j]
    thresh = tol * tol * norm2
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for i in range(n):
            for j in range(i + 1, n):
                off += 2.0 * (hr[i, j] * hr[i, j] + hi[i, j] * hi[i, j])
        if off <= thresh:
            return sweep
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                xr = hr[p, q]
                xi = hi[p, q]
                r = np.sqrt(xr * xr + xi * xi)
                if r == 0.0:
                    continue
                # phase e^{-i arg a_pq} makes the pivot real, then a real rotation
                cr = xr / r
                ci = -xi / r
                theta = (hr[q, q] - hr[p, p]) / (2.0 * r)
                t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # column transform W = [[c, s], [-s e^{-i phi}, c e^{-i phi}]]
                w10r = -s * cr
                w10i = -s * ci
                w11r = c * cr
                w11i = c * ci
                for k in range(n):
                    ar = hr[k, p]
                    ai = hi[k, p]
                    br = hr[k, q]
                    bi = hi[k, q]
                    hr[k, p] = ar * c + br * w10r - bi * w10i
                    hi[k, p] = ai * c + br * w10i + bi * w10r
                    hr[k, q] = ar * s + br * w11r - bi * w11i
                    hi[k, q] = ai * s + br * w11i + bi * w11r
                    ar = vr[k, p]
                    ai = vi[k, p]
                    br = vr[k, q]
                    bi = vi[k, q]
                    vr[k, p] = ar * c + br * w10r - bi * w10i
                    vi[k, p] = ai * c + br * w10i + bi * w10r
                    vr[k, q] = ar * s + br * w11r - bi * w11i
                    vi[k, q] = ai * s + br * w11i + bi * w11r
                for k in range(n):
                    ar = hr[p, k]
                    ai = hi[p, k]
                    br = hr[q, k]
                    bi = hi[q, k]
                    hr[p, k] = c * ar + w10r * br + w10i * bi
                    hi[p, k] = c * ai + w10r * bi - w10i * br
                    hr[q, k] = s * ar + w11r * br + w11i * bi
                    hi[q, k] = s * ai + w11r * bi - w11i * br
                hr[p, q] = 0.0
                hi[p, q] = 0.0
                hr[q, p] = 0.0
                hi[q, p] = 0.0
                hi[p, p] = 0.0
                hi[q, q] = 0.0
    return -1


@njit(cache=True)
def generator_to_unitary(v, dim, ur, ui):
    """Write exp(iH) into ``ur``/``ui`` for the Hermitian H packed in ``v``.

    Packing: ``dim`` diagonal reals, then (re, im) of each upper-triangular
    entry in row-major order. Returns the Jacobi sweep count.
    """
    hr = np.zeros((dim, dim))
    hi = np.zeros((dim, dim))
    for i in range(dim):
        hr[i, i] = v[i]
    pos = dim
    for i in range(dim):
        for j in range(i + 1, dim):
            hr[i, j] = v[pos]
            hr[j, i] = v[pos]
            hi[i, j] = v[pos + 1]
            hi[j, i] = -v[pos + 1]
            pos += 2
    vr = np.empty((dim, dim))
    vi = np.empty((dim, dim))
    sweeps = jacobi_eigh(hr, hi, vr, vi, JACOBI_TOL, JACOBI_MAX_SWEEPS)
    cs = np.empty(dim)
    sn = np.empty(dim)
    for k in range(dim):
        cs[k] = np.cos(hr[k, k])
        sn[k] = np.sin(hr[k, k])
    # U = V diag(e^{iw}) V^dagger
    for a in range(dim):
        for b in range(dim):
            accr = 0.0
            acci = 0.0
            for k in range(dim):
                # (V_ak e^{iw_k})
                tr = vr[a, k] * cs[k] - vi[a, k] * sn[k]
                ti = vr[a, k] * sn[k] + vi[a, k] * cs[k]
                # times conj(V_bk)
                accr += tr * vr[b, k] + ti * vi[b, k]
                acci += ti * vr[b, k] - tr * vi[b, k]
            ur[a, b] = accr
            ui[a, b] = acci
    return sweeps


@njit(cache=True)
def simplex_spectrum(z, d):
    """Normalized exponential of (0, z_1, ..., z_{d-1}), sorted descending."""
    lam = np.zeros(d)
    for i in range(d - 1):
        lam[i + 1] = z[i]
    top = lam.max()
    total = 0.0
    for i in range(d):
        lam[i] = np.exp(lam[i] - top)
        total += lam[i]
    for i in range(d):
        lam[i] /= total
    return -np.sort(-lam)


@njit(cache=True)
def dilation_objective(params, tr, ti, n, m, d):
    """Squared Frobenius distance between the induced and target Choi matrices."""
    dim = n * d
    ur = np.empty((dim, dim))
    ui = np.empty((dim, dim))
    generator_to_unitary(params[: dim * dim], dim, ur, ui)
    lam = simplex_spectrum(params[dim * dim:], d)
    r = dim // m
    cols = d * r
    nm = n * m
    # column (j, k) of M holds vec(A_jk) with A_jk[a, p] = sqrt(lam_j) U[a r + k, p d + j]
    mr = np.empty((nm, cols))
    mi = np.empty((nm, cols))
    for p in range(n):
        for a in range(m):
            row = p * m + a
            for j in range(d):
                sl = np.sqrt(lam[j])
                for k in range(r):
                    mr[row, j * r + k] = sl * ur[a * r + k, p * d + j]
                    mi[row, j * r + k] = sl * ui[a * r + k, p * d + j]
    total = 0.0
    for i in range(nm):
        for l in range(nm):
            accr = 0.0
            acci = 0.0
            for c in range(cols):
                accr += mr[i, c] * mr[l, c] + mi[i, c] * mi[l, c]
                acci += mi[i, c] * mr[l, c] - mr[i, c] * mi[l, c]
            dr = accr - tr[i, l]
            di = acci - ti[i, l]
            total += dr * dr + di * di
    return total


@njit(cache=True)
def _braket(x0, x1, y0, y1):
    return np.conj(x0) * y0 + np.conj(x1) * y1


@njit(cache=True)
def two_pauli_poly_residual(x):
    """Sum of |g_j|^2 over the eleven two-Pauli constraint polynomials."""
    a = np.empty(4, np.complex128)
    b = np.empty(4, np.complex128)
    c = np.empty(4, np.complex128)
    for k in range(4):
        a[k] = x[2 * k] + 1j * x[2 * k + 1]
        b[k] = x[8 + 2 * k] + 1j * x[8 + 2 * k + 1]
        c[k] = x[16 + 2 * k] + 1j * x[16 + 2 * k + 1]
    h = 1.0 / np.sqrt(2.0)
    u00 = (a[0] + c[0]) * h
    u01 = (a[1] + c[1]) * h
    u10 = (a[2] + c[2]) * h
    u11 = (a[3] + c[3]) * h
    w00 = (c[0] - a[0]) * h
    w01 = (c[1] - a[1]) * h
    w10 = (c[2] - a[2]) * h
    w11 = (c[3] - a[3]) * h
    v00 = b[0]
    v01 = b[1]
    v10 = b[2]
    v11 = b[3]
    g = np.empty(11, np.complex128)
    g[0] = _braket(v00, v01, w00, w01) + _braket(u00, u01, v00, v01)
    g[1] = _braket(v10, v11, w10, w11) + _braket(u10, u11, v10, v11)
    g[2] = _braket(v00, v01, w10, w11) + _braket(u00, u01, v10, v11)
    g[3] = _braket(w00, w01, v10, v11) + _braket(v00, v01, u10, u11)
    g[4] = _braket(u00, u01, u00, u01) - _braket(w00, w01, w00, w01)
    g[5] = _braket(u10, u11, u10, u11) - _braket(w10, w11, w10, w11)
    g[6] = _braket(u00, u01, u00, u01) + _braket(u10, u11, u10, u11) - 1.0
    g[7] = _braket(v00, v01, v00, v01) + _braket(v10, v11, v10, v11) - 1.0
    g[8] = _braket(u00, u01, v00, v01) + _braket(u10, u11, v10, v11)
    g[9] = _braket(u00, u01, w00, w01) + _braket(u10, u11, w10, w11)
    g[10] = _braket(u00, u01, u10, u11) - _braket(w00, w01, w10, w11)
    total = 0.0
    for j in range(11):
        total += g[j].real * g[j].real + g[j].imag * g[j].imag
    return total


@njit(cache=True)
def epsilon_from_angles(theta, phi1, phi2):
    c1 = np.cos(phi1)
    c2 = np.cos(phi2)
    s1 = np.sin(phi1)
    s2 = np.sin(phi2)
    ct = np.cos(theta)
    out = np.empty(4)
    out[0] = 0.25 * (c1 * c1 + c2 * c2 + 2.0 * c1 * c2 * ct)
    out[1] = 0.25 * (s1 * s1 + s2 * s2 + 2.0 * s1 * s2 * ct)
    out[2] = 0.25 * (s1 * s1 + s2 * s2 - 2.0 * s1 * s2 * ct)
    out[3] = 0.25 * (c1 * c1 + c2 * c2 - 2.0 * c1 * c2 * ct)
    return out


@njit(cache=True)
def angles_residual(angles, target):
    eps = epsilon_from_angles(angles[0], angles[1], angles[2])
    total = 0.0
    for i in range(4):
        diff = eps[i] - target[i]
        total += diff * diff
    return np.sqrt(total)


@njit(cache=True)
def nelder_mead(f, x0, args, scale, max_evals, xtol, frtol):
    """Nelder-Mead with reflection 1, expansion 2, contraction 1/2, shrink 1/2.

    Stops when the simplex diameter drops below ``xtol``, the spread of
    vertex values drops below ``frtol`` times the best value, or the
    evaluation budget is spent. Returns (x_best, f_best, evals, history)
    where ``history`` is the best vertex value after every iteration.
    """
    n = x0.shape[0]
    sim = np.empty((n + 1, n))
    fs = np.empty(n + 1)
    sim[0] = x0
    for i in range(n):
        sim[i + 1] = x0
        sim[i + 1, i] += scale
    for i in range(n + 1):
        fs[i] = f(sim[i], *args)
    evals = n + 1
    history = np.empty(max_evals + 1)
    iters = 0
    xbar = np.empty(n)
    while evals < max_evals:
        order = np.argsort(fs)
        sim = sim[order]
        fs = fs[order]
        history[iters] = fs[0]
        iters += 1
        diam = 0.0
        for i in range(1, n + 1):
            dsq = 0.0
            for k in range(n):
                dsq += (sim[i, k] - sim[0, k]) ** 2
            if dsq > diam:
                diam = dsq
        if np.sqrt(diam) < xtol:
            break
        if fs[n] - fs[0] <= frtol * fs[0]:
            break
        for k in range(n):
            acc = 0.0
            for i in range(n):
                acc += sim[i, k]
            xbar[k] = acc / n
        xr = 2.0 * xbar - sim[n]
        fr = f(xr, *args)
        evals += 1
        if fr < fs[0]:
            xe = 3.0 * xbar - 2.0 * sim[n]
            fe = f(xe, *args)
            evals += 1
            if fe < fr:
                sim[n] = xe
                fs[n] = fe
            else:
                sim[n] = xr
                fs[n] = fr
        elif fr < fs[n - 1]:
            sim[n] = xr
            fs[n] = fr
        else:
            shrink = False
            if fr < fs[n]:
                xc = 1.5 * xbar - 0.5 * sim[n]
                fc = f(xc, *args)
                evals += 1
                if fc <= fr:
                    sim[n] = xc
                    fs[n] = fc
                else:
                    shrink = True
            else:
                xc = 0.5 * xbar + 0.5 * sim[n]
                fc = f(xc, *args)
                evals += 1
                if fc < fs[n]:
                    sim[n] = xc
                    fs[n] = fc
                else:
                    shrink = True
            if shrink:
                for i in range(1, n + 1):
                    sim[i] = sim[0] + 0.5 * (sim[i] - sim[0])
                    fs[i] = f(sim[i], *args)
                evals += n
    best = np.argmin(fs)
    history[iters] = fs[best]
    return sim[best].copy(), fs[best], evals, history[: iters + 1].copy()
