# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled numeric kernels; same API and arithmetic as ``_kernels_py``.

Compiled with -ffp-contract=off so results match the pure backend to the
last few ulps (no FMA contraction).
"""

from libc.math cimport atan2, ceil, cos, sin, INFINITY, M_PI

import numpy as np
cimport numpy as cnp

cnp.import_array()

BACKEND = "compiled"

cdef double TWO_PI = 2.0 * M_PI
cdef double _REL_MARGIN = 64.0 * 2.220446049250313e-16

STATUS_SATISFIED = 0
STATUS_VIOLATED = 1
STATUS_UNDECIDED = 2

cdef struct Extrema:
    double mn
    double arg_mn
    double mx
    double arg_mx


cdef inline void _update(Extrema* e, double a, double b, double c, double x) noexcept nogil:
    cdef double f = a * cos(x) + b * sin(x) + c
    if f < e.mn:
        e.mn = f
        e.arg_mn = x
    if f > e.mx:
        e.mx = f
        e.arg_mx = x


cdef Extrema _sin_min_max(double a, double b, double c, double lo, double hi) noexcept nogil:
    cdef Extrema e
    cdef double alpha, base, x
    cdef double k0
    cdef int branch
    if a == 0.0 and b == 0.0:
        e.mn = c
        e.mx = c
        e.arg_mn = lo
        e.arg_mx = lo
        return e
    e.mn = INFINITY
    e.mx = -INFINITY
    e.arg_mn = lo
    e.arg_mx = lo
    _update(&e, a, b, c, lo)
    _update(&e, a, b, c, hi)
    alpha = atan2(b, a)
    for branch in range(2):
        base = alpha + branch * M_PI
        k0 = ceil((lo - base) / TWO_PI)
        x = base + TWO_PI * k0
        if x < lo:
            x += TWO_PI
        while x <= hi:
            _update(&e, a, b, c, x)
            x += TWO_PI
    return e


cdef Extrema _neg_square_min_max(double a, double b, double lo, double hi) noexcept nogil:
    cdef Extrema w, out
    cdef double alpha, base, x, k0
    if a == 0.0 and b == 0.0:
        out.mn = 0.0
        out.mx = 0.0
        out.arg_mn = lo
        out.arg_mx = lo
        return out
    w = _sin_min_max(a, b, 0.0, lo, hi)
    if -w.mn >= w.mx:
        out.mn = -(w.mn * w.mn)
        out.arg_mn = w.arg_mn
    else:
        out.mn = -(w.mx * w.mx)
        out.arg_mn = w.arg_mx
    if w.mn == 0.0:
        out.mx = 0.0
        out.arg_mx = w.arg_mn
        return out
    if w.mx == 0.0:
        out.mx = 0.0
        out.arg_mx = w.arg_mx
        return out
    if w.mn < 0.0 < w.mx:
        alpha = atan2(b, a)
        base = alpha + 0.5 * M_PI
        k0 = ceil((lo - base) / M_PI)
        x = base + M_PI * k0
        if x < lo:
            x += M_PI
        if x <= hi:
            out.mx = 0.0
            out.arg_mx = x
            return out
    if -w.mn <= w.mx:
        out.mx = -(w.mn * w.mn)
        out.arg_mx = w.arg_mn
    else:
        out.mx = -(w.mx * w.mx)
        out.arg_mx = w.arg_mx
    return out


def sinusoid_min_max(double a, double b, double c, double lo, double hi):
    """Exact extrema of a*cos(x) + b*sin(x) + c over [lo, hi]."""
    if lo > hi:
        raise ValueError(f"empty interval [{lo}, {hi}]")
    cdef Extrema e = _sin_min_max(a, b, c, lo, hi)
    return (e.mn, e.arg_mn, e.mx, e.arg_mx)


def neg_square_min_max(double a, double b, double lo, double hi):
    """Exact extrema of -(a*cos(x) + b*sin(x))^2 over [lo, hi]."""
    if lo > hi:
        raise ValueError(f"empty interval [{lo}, {hi}]")
    cdef Extrema e = _neg_square_min_max(a, b, lo, hi)
    return (e.mn, e.arg_mn, e.mx, e.arg_mx)


cdef inline void _pair_bounds_row(const double* row, const double* lo, const double* hi,
                                  double* out) noexcept nogil:
    cdef Py_ssize_t i = <Py_ssize_t> row[0]
    cdef Py_ssize_t j = <Py_ssize_t> row[1]
    cdef double D = row[2], E = row[3], H = row[5]
    cdef double vi = row[6], vj = row[7], phii = row[8], phij = row[9]
    cdef double K1 = row[10], K2 = row[11], K3 = row[12]
    cdef double pil = phii + lo[i], pih = phii + hi[i]
    cdef double pjl = phij + lo[j], pjh = phij + hi[j]
    cdef Extrema gm = _neg_square_min_max(D * vi, E * vi, pil, pih)
    cdef Extrema dl = _neg_square_min_max(D * vj, E * vj, pjl, pjh)
    cdef Extrema lm = _sin_min_max(K1, 0.0, 0.0, pil - pjh, pih - pjl)
    cdef Extrema lp = _sin_min_max(K2, K3, 0.0, pil + pjl, pih + pjh)
    cdef Extrema om = _sin_min_max(-D * vi, -E * vi, 0.0, pil, pih)
    cdef Extrema op = _sin_min_max(D * vj, E * vj, 0.0, pjl, pjh)
    out[0] = gm.mn + dl.mn + lm.mn + lp.mn + H
    out[1] = gm.mx + dl.mx + lm.mx + lp.mx + H
    out[2] = om.mn + op.mn
    out[3] = om.mx + op.mx


def pair_box_bounds(double[:, ::1] P, double[::1] lo, double[::1] hi):
    """Certified per-pair bounds of g and Omega sum over a theta box."""
    cdef Py_ssize_t m = P.shape[0]
    g_lo = np.empty(m)
    g_hi = np.empty(m)
    w_lo = np.empty(m)
    w_hi = np.empty(m)
    cdef double[::1] gl = g_lo, gh = g_hi, wl = w_lo, wh = w_hi
    cdef double out[4]
    cdef Py_ssize_t k
    with nogil:
        for k in range(m):
            _pair_bounds_row(&P[k, 0], &lo[0], &hi[0], out)
            gl[k] = out[0]
            gh[k] = out[1]
            wl[k] = out[2]
            wh[k] = out[3]
    return g_lo, g_hi, w_lo, w_hi


cdef double _box_obj_lb(const double* lo, const double* hi, Py_ssize_t n) noexcept nogil:
    cdef double total = 0.0
    cdef double l, h
    cdef Py_ssize_t k
    for k in range(n):
        l = lo[k]
        h = hi[k]
        if l <= 0.0 <= h:
            continue
        if l * l < h * h:
            total += l * l
        else:
            total += h * h
    return total


def box_obj_lb(double[::1] lo, double[::1] hi):
    """Minimum of sum(theta_i^2) over the box."""
    return _box_obj_lb(&lo[0], &hi[0], lo.shape[0])


def classify_box(double[:, ::1] P, double[::1] lo, double[::1] hi):
    """(status, obj_lb) of a theta box; see the pure backend for semantics."""
    cdef Py_ssize_t m = P.shape[0]
    cdef Py_ssize_t k
    cdef bint all_sat = 1
    cdef int status = 0
    cdef double out[4]
    with nogil:
        for k in range(m):
            _pair_bounds_row(&P[k, 0], &lo[0], &hi[0], out)
            if out[1] < -_REL_MARGIN * P[k, 13] and out[2] > _REL_MARGIN * P[k, 14]:
                status = 1
                break
            if not (out[3] <= 0.0 or out[0] >= 0.0):
                all_sat = 0
        if status != 1 and not all_sat:
            status = 2
    return status, _box_obj_lb(&lo[0], &hi[0], lo.shape[0])


def point_margins(double[:, ::1] P, double[::1] theta):
    """Per-pair (g, omega_sum, vv) at one heading vector."""
    cdef Py_ssize_t m = P.shape[0]
    g = np.empty(m)
    w = np.empty(m)
    vv = np.empty(m)
    cdef double[::1] gv = g, wv = w, vvv = vv
    cdef Py_ssize_t k
    cdef double psi_i, psi_j, vx, vy, s, xv
    with nogil:
        for k in range(m):
            psi_i = P[k, 8] + theta[<Py_ssize_t> P[k, 0]]
            psi_j = P[k, 9] + theta[<Py_ssize_t> P[k, 1]]
            vx = cos(psi_i) * P[k, 6] - cos(psi_j) * P[k, 7]
            vy = sin(psi_i) * P[k, 6] - sin(psi_j) * P[k, 7]
            s = vx * vx + vy * vy
            xv = P[k, 2] * vx + P[k, 3] * vy
            gv[k] = s * P[k, 4] - xv * xv
            wv[k] = -xv
            vvv[k] = s
    return g, w, vv


def batch_point_margins(double[:, ::1] P, double[:, ::1] thetas):
    """(g, omega_sum, vv) of shape (samples, pairs)."""
    cdef Py_ssize_t m = thetas.shape[0]
    cdef Py_ssize_t p = P.shape[0]
    g = np.empty((m, p))
    w = np.empty((m, p))
    vv = np.empty((m, p))
    cdef double[:, ::1] gv = g, wv = w, vvv = vv
    cdef Py_ssize_t s, k
    cdef double psi_i, psi_j, vx, vy, sq, xv
    with nogil:
        for s in range(m):
            for k in range(p):
                psi_i = P[k, 8] + thetas[s, <Py_ssize_t> P[k, 0]]
                psi_j = P[k, 9] + thetas[s, <Py_ssize_t> P[k, 1]]
                vx = cos(psi_i) * P[k, 6] - cos(psi_j) * P[k, 7]
                vy = sin(psi_i) * P[k, 6] - sin(psi_j) * P[k, 7]
                sq = vx * vx + vy * vy
                xv = P[k, 2] * vx + P[k, 3] * vy
                gv[s, k] = sq * P[k, 4] - xv * xv
                wv[s, k] = -xv
                vvv[s, k] = sq
    return g, w, vv


def batch_pair_terms(double D, double E, double C, double H,
                     double vi, double vj, double phii, double phij,
                     ti, tj):
    """Univariate term values of one pair at many theta samples."""
    cdef double[::1] tiv = np.ascontiguousarray(ti, dtype=np.float64)
    cdef double[::1] tjv = np.ascontiguousarray(tj, dtype=np.float64)
    cdef Py_ssize_t m = tiv.shape[0]
    gamma = np.empty(m)
    delta = np.empty(m)
    lam_minus = np.empty(m)
    lam_plus = np.empty(m)
    omega_minus = np.empty(m)
    omega_plus = np.empty(m)
    cdef double[::1] ga = gamma, de = delta, lm = lam_minus, lp = lam_plus
    cdef double[::1] om = omega_minus, op = omega_plus
    cdef Py_ssize_t k
    cdef double psi_i, psi_j, ci, si, cj, sj, phim, phip, u1, u2
    with nogil:
        for k in range(m):
            psi_i = phii + tiv[k]
            psi_j = phij + tjv[k]
            ci = cos(psi_i)
            si = sin(psi_i)
            cj = cos(psi_j)
            sj = sin(psi_j)
            u1 = ci * D * vi
            u2 = si * E * vi
            ga[k] = -(u1 * u1) - u2 * u2 - ci * si * 2.0 * D * E * vi * vi
            u1 = cj * D * vj
            u2 = sj * E * vj
            de[k] = -(u1 * u1) - u2 * u2 - cj * sj * 2.0 * D * E * vj * vj
            phim = psi_i - psi_j
            phip = psi_i + psi_j
            lm[k] = cos(phim) * vi * vj * (D * D + E * E - 2.0 * C)
            lp[k] = cos(phip) * vi * vj * (D * D - E * E) + sin(phip) * 2.0 * vi * vj * D * E
            om[k] = -D * ci * vi - E * si * vi
            op[k] = D * cj * vj + E * sj * vj
    return gamma, delta, lam_minus, lam_plus, omega_minus, omega_plus


def oracle_scan_min(double dx0, double dy0, double dvx, double dvy,
                    double dt, Py_ssize_t nsteps):
    """Grid scan of squared pair distance; returns (imin, d2min)."""
    cdef Py_ssize_t k, imin = 0
    cdef double t, dx, dy, d2
    cdef double best = INFINITY
    with nogil:
        for k in range(nsteps):
            t = k * dt
            dx = dx0 + t * dvx
            dy = dy0 + t * dvy
            d2 = dx * dx + dy * dy
            if d2 < best:
                best = d2
                imin = k
    return imin, best


def batch_oracle_scan_min(double[::1] dx0, double[::1] dy0,
                          double[::1] dvx, double[::1] dvy,
                          double dt, Py_ssize_t nsteps, Py_ssize_t chunk=256):
    """Vectorized oracle_scan_min over many pairs."""
    cdef Py_ssize_t m = dx0.shape[0]
    imin = np.empty(m, dtype=np.int64)
    d2min = np.empty(m)
    cdef long long[::1] iv = imin
    cdef double[::1] dv = d2min
    cdef Py_ssize_t r, k, best_k
    cdef double t, dx, dy, d2, best
    with nogil:
        for r in range(m):
            best = INFINITY
            best_k = 0
            for k in range(nsteps):
                t = k * dt
                dx = dx0[r] + t * dvx[r]
                dy = dy0[r] + t * dvy[r]
                d2 = dx * dx + dy * dy
                if d2 < best:
                    best = d2
                    best_k = k
            iv[r] = best_k
            dv[r] = best
    return imin, d2min
