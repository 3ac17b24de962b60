"""Univariate decomposition of the pair separation condition.

With psi_i = phi_i + theta_i and pair constants C, D, E, H, the left-hand
side of the separation condition splits exactly into univariate pieces

    g = C |V|^2 - (X . V)^2 = Gamma(psi_i) + Delta(psi_j)
        + Lambda^-(Phi^-) + Lambda^+(Phi^+) + H

where Phi^- = psi_i - psi_j and Phi^+ = psi_i + psi_j, and the activation
quantity decomposes as -(X . V) = Omega^-(psi_i) + Omega^+(psi_j).  Every
piece is an affine sinusoid or the negated square of one, so certified
minima/maxima over angle intervals come from closed-form extrema; those give
the constants M (separation), M^- and M^+ (activation band) used by the
mixed-binary reformulation and by the global solver's box bounds.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from . import kernels
from .geometry import Instance, PairGeometry

__all__ = [
    "SinusoidAffine",
    "SinusoidExtrema",
    "sinusoid_extrema",
    "SeparableTerms",
    "TermValues",
    "eval_terms",
    "identity_residual",
    "identity_residual_samples",
    "TermExtremum",
    "BigMBundle",
    "compute_bigm",
    "Interval",
    "TermBounds",
    "term_bounds_on_box",
    "cos_cos",
    "sin_sin",
    "cos_sin",
    "sin_cos",
]


@dataclass(frozen=True)
class SinusoidAffine:
    """psi -> a*cos(psi) + b*sin(psi) + c on the closed interval [lo, hi]."""

    a: float
    b: float
    c: float
    lo: float
    hi: float

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError(f"empty domain [{self.lo}, {self.hi}]")

    def __call__(self, x: float) -> float:
        return self.a * math.cos(x) + self.b * math.sin(x) + self.c


class SinusoidExtrema(NamedTuple):
    min: float
    argmin: float
    max: float
    argmax: float


def sinusoid_extrema(s: SinusoidAffine) -> SinusoidExtrema:
    """Exact extrema of an affine sinusoid over its interval domain.

    Evaluates the endpoints plus every interior critical point (where the
    derivative -a*sin + b*cos vanishes, i.e. tan(psi) = b/a, both branches,
    shifted by multiples of 2*pi into the interval) and returns the attained
    extrema with their arguments.
    """
    mn, arg_mn, mx, arg_mx = kernels.sinusoid_min_max(s.a, s.b, s.c, s.lo, s.hi)
    return SinusoidExtrema(mn, arg_mn, mx, arg_mx)


class TermValues(NamedTuple):
    """All univariate term values of one pair at one (theta_i, theta_j)."""

    gamma: float
    delta: float
    lam_minus: float
    lam_plus: float
    omega_minus: float
    omega_plus: float
    phi_minus: float
    phi_plus: float


@dataclass(frozen=True)
class SeparableTerms:
    """Per-pair univariate evaluators and their angle offsets."""

    i: int
    j: int
    D: float
    E: float
    C: float
    H: float
    vi: float
    vj: float
    phii: float
    phij: float

    @classmethod
    def from_pair(cls, pg: PairGeometry, inst: Instance) -> "SeparableTerms":
        ai, aj = inst.aircraft[pg.i], inst.aircraft[pg.j]
        return cls(pg.i, pg.j, pg.D, pg.E, pg.C, pg.H, ai.v, aj.v, ai.phi, aj.phi)

    # -- angle composites -------------------------------------------------
    def phi_minus(self, theta_i: float, theta_j: float) -> float:
        return (self.phii + theta_i) - (self.phij + theta_j)

    def phi_plus(self, theta_i: float, theta_j: float) -> float:
        return (self.phii + theta_i) + (self.phij + theta_j)

    # -- univariate terms --------------------------------------------------
    def gamma(self, theta_i: float) -> float:
        psi = self.phii + theta_i
        c, s = math.cos(psi), math.sin(psi)
        u1 = c * self.D * self.vi
        u2 = s * self.E * self.vi
        return -(u1 * u1) - u2 * u2 - c * s * 2.0 * self.D * self.E * self.vi * self.vi

    def delta(self, theta_j: float) -> float:
        psi = self.phij + theta_j
        c, s = math.cos(psi), math.sin(psi)
        u1 = c * self.D * self.vj
        u2 = s * self.E * self.vj
        return -(u1 * u1) - u2 * u2 - c * s * 2.0 * self.D * self.E * self.vj * self.vj

    def lambda_minus(self, phi_m: float) -> float:
        return math.cos(phi_m) * self.vi * self.vj * (
            self.D * self.D + self.E * self.E - 2.0 * self.C
        )

    def lambda_plus(self, phi_p: float) -> float:
        k2 = self.vi * self.vj * (self.D * self.D - self.E * self.E)
        k3 = 2.0 * self.vi * self.vj * self.D * self.E
        return math.cos(phi_p) * k2 + math.sin(phi_p) * k3

    def omega_minus(self, theta_i: float) -> float:
        psi = self.phii + theta_i
        return -self.D * math.cos(psi) * self.vi - self.E * math.sin(psi) * self.vi

    def omega_plus(self, theta_j: float) -> float:
        psi = self.phij + theta_j
        return self.D * math.cos(psi) * self.vj + self.E * math.sin(psi) * self.vj

    # -- domains (full instance theta bounds) ------------------------------
    def psi_i_domain(self, inst: Instance) -> tuple[float, float]:
        a = inst.aircraft[self.i]
        return (self.phii + a.theta_min, self.phii + a.theta_max)

    def psi_j_domain(self, inst: Instance) -> tuple[float, float]:
        a = inst.aircraft[self.j]
        return (self.phij + a.theta_min, self.phij + a.theta_max)


def eval_terms(
    pg: PairGeometry, inst: Instance, theta_i: float, theta_j: float
) -> TermValues:
    """Evaluate every univariate term of pair pg at (theta_i, theta_j)."""
    t = SeparableTerms.from_pair(pg, inst)
    phim = t.phi_minus(theta_i, theta_j)
    phip = t.phi_plus(theta_i, theta_j)
    return TermValues(
        gamma=t.gamma(theta_i),
        delta=t.delta(theta_j),
        lam_minus=t.lambda_minus(phim),
        lam_plus=t.lambda_plus(phip),
        omega_minus=t.omega_minus(theta_i),
        omega_plus=t.omega_plus(theta_j),
        phi_minus=phim,
        phi_plus=phip,
    )


def _residual_core(D, E, C, H, vi, vj, psi_i, psi_j):
    """(term sum) - (C|V|^2 - (X.V)^2), dtype-generic (used with longdouble)."""
    ci, si = np.cos(psi_i), np.sin(psi_i)
    cj, sj = np.cos(psi_j), np.sin(psi_j)
    u1 = ci * D * vi
    u2 = si * E * vi
    gamma = -(u1 * u1) - u2 * u2 - ci * si * 2 * D * E * vi * vi
    u1 = cj * D * vj
    u2 = sj * E * vj
    delta = -(u1 * u1) - u2 * u2 - cj * sj * 2 * D * E * vj * vj
    phim = psi_i - psi_j
    phip = psi_i + psi_j
    lam_minus = np.cos(phim) * vi * vj * (D * D + E * E - 2 * C)
    lam_plus = np.cos(phip) * vi * vj * (D * D - E * E) + np.sin(phip) * 2 * vi * vj * D * E
    vx = ci * vi - cj * vj
    vy = si * vi - sj * vj
    xv = D * vx + E * vy
    direct = C * (vx * vx + vy * vy) - xv * xv
    return (gamma + delta + lam_minus + lam_plus + H) - direct


def identity_residual(
    pg: PairGeometry, inst: Instance, theta_i: float, theta_j: float
) -> float:
    """Defect of the exact separability identity at one point.

    Algebraically zero; evaluated in extended precision so the returned value
    reflects the identity itself rather than double-rounding noise, staying
    below 1e-9 * max(1, |g|) across the admissible speed range.
    """
    ld = np.longdouble
    ai, aj = inst.aircraft[pg.i], inst.aircraft[pg.j]
    r = _residual_core(
        ld(pg.D), ld(pg.E), ld(pg.C), ld(pg.H), ld(ai.v), ld(aj.v),
        ld(ai.phi) + ld(theta_i), ld(aj.phi) + ld(theta_j),
    )
    return float(r)


def identity_residual_samples(D, E, C, H, vi, vj, psi_i, psi_j) -> np.ndarray:
    """Vectorized identity residuals from raw pair constants (see above)."""
    ld = np.longdouble
    args = [np.asarray(x, dtype=ld) for x in (D, E, C, H, vi, vj, psi_i, psi_j)]
    return _residual_core(*args).astype(float)


@dataclass(frozen=True)
class TermExtremum:
    """An attained one-sided bound: the value and the argument reaching it.

    The argument lives in the term's own variable (psi for the single-pair
    terms, Phi^-/Phi^+ for the interaction terms).
    """

    value: float
    arg: float


@dataclass(frozen=True)
class BigMBundle:
    """Certified constants of one pair over the full theta box.

    M bounds the separation sum from below, M_minus / M_plus bound the
    activation sum Omega^- + Omega^+ (min resp. max, each as the sum of the
    per-term extrema).  ``seconds`` records the computation time.
    """

    i: int
    j: int
    M: float
    M_minus: float
    M_plus: float
    gamma_min: TermExtremum
    gamma_max: TermExtremum
    delta_min: TermExtremum
    delta_max: TermExtremum
    lam_minus_min: TermExtremum
    lam_minus_max: TermExtremum
    lam_plus_min: TermExtremum
    lam_plus_max: TermExtremum
    omega_minus_min: TermExtremum
    omega_minus_max: TermExtremum
    omega_plus_min: TermExtremum
    omega_plus_max: TermExtremum
    seconds: float


def _box_for(inst: Instance) -> list[tuple[float, float]]:
    return [(a.theta_min, a.theta_max) for a in inst.aircraft]


def compute_bigm(pg: PairGeometry, inst: Instance) -> BigMBundle:
    """Per-term closed-form extrema over the instance theta bounds.

    M sums the independent per-term minima (plus H); the joint minimum over
    (theta_i, theta_j) can be larger, which only makes M safer.
    """
    t0 = time.perf_counter()
    tb = term_bounds_on_box(pg, inst, _box_for(inst))
    st = SeparableTerms.from_pair(pg, inst)
    m = (
        tb.gamma[0].value
        + tb.delta[0].value
        + tb.lam_minus[0].value
        + tb.lam_plus[0].value
        + st.H
    )
    return BigMBundle(
        i=pg.i,
        j=pg.j,
        M=m,
        M_minus=tb.omega_minus[0].value + tb.omega_plus[0].value,
        M_plus=tb.omega_minus[1].value + tb.omega_plus[1].value,
        gamma_min=tb.gamma[0],
        gamma_max=tb.gamma[1],
        delta_min=tb.delta[0],
        delta_max=tb.delta[1],
        lam_minus_min=tb.lam_minus[0],
        lam_minus_max=tb.lam_minus[1],
        lam_plus_min=tb.lam_plus[0],
        lam_plus_max=tb.lam_plus[1],
        omega_minus_min=tb.omega_minus[0],
        omega_minus_max=tb.omega_minus[1],
        omega_plus_min=tb.omega_plus[0],
        omega_plus_max=tb.omega_plus[1],
        seconds=time.perf_counter() - t0,
    )


Interval = tuple[TermExtremum, TermExtremum]


@dataclass(frozen=True)
class TermBounds:
    """Attained (min, max) of every term and of g over a theta sub-box."""

    gamma: Interval
    delta: Interval
    lam_minus: Interval
    lam_plus: Interval
    omega_minus: Interval
    omega_plus: Interval
    omega_sum: tuple[float, float]
    g: tuple[float, float]


def term_bounds_on_box(
    pg: PairGeometry, inst: Instance, box: Sequence[tuple[float, float]]
) -> TermBounds:
    """Certified per-term bounds over a sub-box of the theta bounds.

    Each bound is the exact extremum of its univariate term over the induced
    angle interval, so it is attained at the returned argument; the g bounds
    sum the per-term bounds (valid, and tight up to term interaction).
    """
    st = SeparableTerms.from_pair(pg, inst)
    ai, aj = inst.aircraft[st.i], inst.aircraft[st.j]
    li, hi_i = box[st.i]
    lj, hi_j = box[st.j]
    if li > hi_i or lj > hi_j:
        raise ValueError("empty box")
    slack = 1e-12
    if (
        li < ai.theta_min - slack
        or hi_i > ai.theta_max + slack
        or lj < aj.theta_min - slack
        or hi_j > aj.theta_max + slack
    ):
        raise ValueError("box exceeds the instance theta bounds")

    pil, pih = st.phii + li, st.phii + hi_i
    pjl, pjh = st.phij + lj, st.phij + hi_j

    def ext(fn, a, b, lo, hi) -> Interval:
        mn, amn, mx, amx = fn(a, b, lo, hi)
        return (TermExtremum(mn, amn), TermExtremum(mx, amx))

    gamma = ext(kernels.neg_square_min_max, st.D * st.vi, st.E * st.vi, pil, pih)
    delta = ext(kernels.neg_square_min_max, st.D * st.vj, st.E * st.vj, pjl, pjh)
    k1 = st.vi * st.vj * (st.D * st.D + st.E * st.E - 2.0 * st.C)
    k2 = st.vi * st.vj * (st.D * st.D - st.E * st.E)
    k3 = 2.0 * st.vi * st.vj * st.D * st.E
    lam_minus = ext(
        lambda a, b, lo, hi: kernels.sinusoid_min_max(a, b, 0.0, lo, hi),
        k1, 0.0, pil - pjh, pih - pjl,
    )
    lam_plus = ext(
        lambda a, b, lo, hi: kernels.sinusoid_min_max(a, b, 0.0, lo, hi),
        k2, k3, pil + pjl, pih + pjh,
    )
    om = ext(
        lambda a, b, lo, hi: kernels.sinusoid_min_max(a, b, 0.0, lo, hi),
        -st.D * st.vi, -st.E * st.vi, pil, pih,
    )
    op = ext(
        lambda a, b, lo, hi: kernels.sinusoid_min_max(a, b, 0.0, lo, hi),
        st.D * st.vj, st.E * st.vj, pjl, pjh,
    )
    g_lo = gamma[0].value + delta[0].value + lam_minus[0].value + lam_plus[0].value + st.H
    g_hi = gamma[1].value + delta[1].value + lam_minus[1].value + lam_plus[1].value + st.H
    return TermBounds(
        gamma=gamma,
        delta=delta,
        lam_minus=lam_minus,
        lam_plus=lam_plus,
        omega_minus=om,
        omega_plus=op,
        omega_sum=(om[0].value + op[0].value, om[1].value + op[1].value),
        g=(g_lo, g_hi),
    )


# Product-to-sum identities used by the decomposition of the cross terms.


def cos_cos(a: float, b: float) -> float:
    return 0.5 * (math.cos(a - b) + math.cos(a + b))


def sin_sin(a: float, b: float) -> float:
    return 0.5 * (math.cos(a - b) - math.cos(a + b))


def cos_sin(a: float, b: float) -> float:
    return 0.5 * (math.sin(a + b) - math.sin(a - b))


def sin_cos(a: float, b: float) -> float:
    return 0.5 * (math.sin(a - b) + math.sin(a + b))
