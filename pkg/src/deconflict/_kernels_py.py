"""Pure-Python/numpy fallback for the numeric kernels.

Mirrors the API of the compiled extension ``deconflict._kernels``; selected at
import time by :mod:`deconflict.kernels` when the extension is unavailable or
``DECONFLICT_PURE_PYTHON=1``.

Pair constants are packed row-per-pair into a float64 table with columns
(see ``kernels.PAIR_COLUMNS``):

    0 i   1 j   2 D   3 E   4 C   5 H   6 vi   7 vj   8 phii   9 phij
    10 K1  11 K2  12 K3  13 scale_g  14 scale_w

where K1 = vi vj (D^2 + E^2 - 2C), K2 = vi vj (D^2 - E^2), K3 = 2 vi vj D E
are the coefficients of the pair's interaction sinusoids.
"""

from __future__ import annotations

import math

import numpy as np

BACKEND = "python"

TWO_PI = 2.0 * math.pi

# Rounding slack factor applied to per-pair magnitude scales when classifying
# a box; keeps "violated" sound against last-ulp errors in the term bounds.
_REL_MARGIN = 64.0 * 2.220446049250313e-16

STATUS_SATISFIED = 0
STATUS_VIOLATED = 1
STATUS_UNDECIDED = 2


def sinusoid_min_max(a, b, c, lo, hi):
    """Exact extrema of a*cos(x) + b*sin(x) + c over [lo, hi].

    Returns (min, argmin, max, argmax); ties resolved by candidate order
    (lo, hi, then interior critical points ascending).
    """
    if lo > hi:
        raise ValueError(f"empty interval [{lo}, {hi}]")
    if a == 0.0 and b == 0.0:
        return (c, lo, c, lo)
    alpha = math.atan2(b, a)  # f(x) = R cos(x - alpha) + c
    cands = [lo, hi]
    for base in (alpha, alpha + math.pi):
        k0 = math.ceil((lo - base) / TWO_PI)
        x = base + TWO_PI * k0
        if x < lo:  # guard against rounding in ceil
            x += TWO_PI
        while x <= hi:
            cands.append(x)
            x += TWO_PI
    mn = math.inf
    mx = -math.inf
    arg_mn = arg_mx = lo
    for x in cands:
        f = a * math.cos(x) + b * math.sin(x) + c
        if f < mn:
            mn, arg_mn = f, x
        if f > mx:
            mx, arg_mx = f, x
    return (mn, arg_mn, mx, arg_mx)


def neg_square_min_max(a, b, lo, hi):
    """Exact extrema of -(a*cos(x) + b*sin(x))^2 over [lo, hi].

    This is the shape of the single-aircraft terms: the negated square of an
    amplitude sinusoid.  Returns (min, argmin, max, argmax).
    """
    if a == 0.0 and b == 0.0:
        return (0.0, lo, 0.0, lo)
    w_mn, w_arg_mn, w_mx, w_arg_mx = sinusoid_min_max(a, b, 0.0, lo, hi)
    if -w_mn >= w_mx:  # |w| maximal at the sinusoid minimum
        t_mn, t_arg_mn = -(w_mn * w_mn), w_arg_mn
    else:
        t_mn, t_arg_mn = -(w_mx * w_mx), w_arg_mx
    if w_mn == 0.0:
        return (t_mn, t_arg_mn, 0.0, w_arg_mn)
    if w_mx == 0.0:
        return (t_mn, t_arg_mn, 0.0, w_arg_mx)
    if w_mn < 0.0 < w_mx:
        # Sign change: the square vanishes at a zero of w inside the interval.
        alpha = math.atan2(b, a)
        base = alpha + 0.5 * math.pi
        k0 = math.ceil((lo - base) / math.pi)
        x = base + math.pi * k0
        if x < lo:
            x += math.pi
        if x <= hi:
            return (t_mn, t_arg_mn, 0.0, x)
        # Rounding pushed the zero out of range; fall through to endpoints.
    if -w_mn <= w_mx:  # |w| minimal at the sinusoid minimum
        return (t_mn, t_arg_mn, -(w_mn * w_mn), w_arg_mn)
    return (t_mn, t_arg_mn, -(w_mx * w_mx), w_arg_mx)


def pair_box_bounds(P, lo, hi):
    """Certified per-pair bounds of g and of Omega^- + Omega^+ over a theta box.

    Returns (g_lo, g_hi, w_lo, w_hi) arrays, one entry per pair.  Each bound
    is the exact extremum of the separable term sum (attained per term).
    """
    m = P.shape[0]
    g_lo = np.empty(m)
    g_hi = np.empty(m)
    w_lo = np.empty(m)
    w_hi = np.empty(m)
    for k in range(m):
        g_lo[k], g_hi[k], w_lo[k], w_hi[k] = _pair_bounds_row(P[k], lo, hi)
    return g_lo, g_hi, w_lo, w_hi


def _pair_bounds_row(row, lo, hi):
    i = int(row[0])
    j = int(row[1])
    D, E, _C, H, vi, vj, phii, phij = row[2:10]
    K1, K2, K3 = row[10:13]
    pil, pih = phii + lo[i], phii + hi[i]
    pjl, pjh = phij + lo[j], phij + hi[j]
    gm_lo, _, gm_hi, _ = neg_square_min_max(D * vi, E * vi, pil, pih)
    dl_lo, _, dl_hi, _ = neg_square_min_max(D * vj, E * vj, pjl, pjh)
    lm_lo, _, lm_hi, _ = sinusoid_min_max(K1, 0.0, 0.0, pil - pjh, pih - pjl)
    lp_lo, _, lp_hi, _ = sinusoid_min_max(K2, K3, 0.0, pil + pjl, pih + pjh)
    om_lo, _, om_hi, _ = sinusoid_min_max(-D * vi, -E * vi, 0.0, pil, pih)
    op_lo, _, op_hi, _ = sinusoid_min_max(D * vj, E * vj, 0.0, pjl, pjh)
    return (
        gm_lo + dl_lo + lm_lo + lp_lo + H,
        gm_hi + dl_hi + lm_hi + lp_hi + H,
        om_lo + op_lo,
        om_hi + op_hi,
    )


def box_obj_lb(lo, hi):
    """Minimum of sum(theta_i^2) over the box (0 if an interval straddles 0)."""
    total = 0.0
    for k in range(len(lo)):
        l, h = lo[k], hi[k]
        if l <= 0.0 <= h:
            continue
        total += min(l * l, h * h)
    return total


def classify_box(P, lo, hi):
    """Classify a theta box against all pair disjunctions.

    Returns (status, obj_lb) with status SATISFIED (every theta in the box is
    feasible), VIOLATED (no theta in the box is feasible: some pair is
    converging with g < 0 throughout), or UNDECIDED.
    """
    m = P.shape[0]
    all_sat = True
    for k in range(m):
        g_lo, g_hi, w_lo, w_hi = _pair_bounds_row(P[k], lo, hi)
        if g_hi < -_REL_MARGIN * P[k, 13] and w_lo > _REL_MARGIN * P[k, 14]:
            return STATUS_VIOLATED, box_obj_lb(lo, hi)
        if not (w_hi <= 0.0 or g_lo >= 0.0):
            all_sat = False
    status = STATUS_SATISFIED if all_sat else STATUS_UNDECIDED
    return status, box_obj_lb(lo, hi)


def point_margins(P, theta):
    """Per-pair (g, omega_sum, vv) at one heading vector."""
    m = P.shape[0]
    g = np.empty(m)
    w = np.empty(m)
    vv = np.empty(m)
    for k in range(m):
        row = P[k]
        psi_i = row[8] + theta[int(row[0])]
        psi_j = row[9] + theta[int(row[1])]
        vx = math.cos(psi_i) * row[6] - math.cos(psi_j) * row[7]
        vy = math.sin(psi_i) * row[6] - math.sin(psi_j) * row[7]
        s = vx * vx + vy * vy
        xv = row[2] * vx + row[3] * vy
        g[k] = s * row[4] - xv * xv
        w[k] = -xv
        vv[k] = s
    return g, w, vv


def batch_point_margins(P, thetas):
    """(g, omega_sum, vv) for every (sample, pair); thetas has shape (m, n)."""
    idx_i = P[:, 0].astype(np.intp)
    idx_j = P[:, 1].astype(np.intp)
    psi_i = P[:, 8] + thetas[:, idx_i]
    psi_j = P[:, 9] + thetas[:, idx_j]
    vx = np.cos(psi_i) * P[:, 6] - np.cos(psi_j) * P[:, 7]
    vy = np.sin(psi_i) * P[:, 6] - np.sin(psi_j) * P[:, 7]
    vv = vx * vx + vy * vy
    xv = P[:, 2] * vx + P[:, 3] * vy
    g = vv * P[:, 4] - xv * xv
    return g, -xv, vv


def batch_pair_terms(D, E, C, H, vi, vj, phii, phij, ti, tj):
    """Univariate term values of one pair at many (theta_i, theta_j) samples.

    Returns (gamma, delta, lam_minus, lam_plus, omega_minus, omega_plus).
    """
    ti = np.asarray(ti, dtype=float)
    tj = np.asarray(tj, dtype=float)
    psi_i = phii + ti
    psi_j = phij + tj
    ci, si = np.cos(psi_i), np.sin(psi_i)
    cj, sj = np.cos(psi_j), np.sin(psi_j)
    u1 = ci * D * vi
    u2 = si * E * vi
    gamma = -(u1 * u1) - u2 * u2 - ci * si * 2.0 * D * E * vi * vi
    u1 = cj * D * vj
    u2 = sj * E * vj
    delta = -(u1 * u1) - u2 * u2 - cj * sj * 2.0 * D * E * vj * vj
    phim = psi_i - psi_j
    phip = psi_i + psi_j
    lam_minus = np.cos(phim) * vi * vj * (D * D + E * E - 2.0 * C)
    lam_plus = np.cos(phip) * vi * vj * (D * D - E * E) + np.sin(phip) * 2.0 * vi * vj * D * E
    omega_minus = -D * ci * vi - E * si * vi
    omega_plus = D * cj * vj + E * sj * vj
    return gamma, delta, lam_minus, lam_plus, omega_minus, omega_plus


def oracle_scan_min(dx0, dy0, dvx, dvy, dt, nsteps):
    """Grid scan of the squared pair distance under straight-line motion.

    Samples t = 0, dt, ..., (nsteps-1)*dt and returns (imin, d2min) with the
    first index attaining the minimum.
    """
    t = np.arange(nsteps) * dt
    dx = dx0 + t * dvx
    dy = dy0 + t * dvy
    d2 = dx * dx + dy * dy
    imin = int(np.argmin(d2))
    return imin, float(d2[imin])


def batch_oracle_scan_min(dx0, dy0, dvx, dvy, dt, nsteps, chunk=256):
    """Vectorized oracle_scan_min over many pairs (1D input arrays)."""
    m = len(dx0)
    imin = np.empty(m, dtype=np.int64)
    d2min = np.empty(m)
    t = np.arange(nsteps) * dt
    for s in range(0, m, chunk):
        e = min(s + chunk, m)
        dx = dx0[s:e, None] + t[None, :] * dvx[s:e, None]
        dy = dy0[s:e, None] + t[None, :] * dvy[s:e, None]
        d2 = dx * dx + dy * dy
        im = np.argmin(d2, axis=1)
        imin[s:e] = im
        d2min[s:e] = d2[np.arange(e - s), im]
    return imin, d2min
