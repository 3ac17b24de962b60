"""Exact uniform-motion conflict geometry for pairs of aircraft.

Every aircraft flies a straight line from its initial position with constant
speed; the decision variable is an additive deviation ``theta_i`` applied to
its initial heading.  For a pair ``(i, j)`` with relative initial position
``X = (D, E)`` and relative velocity ``V(theta)``, the squared distance at
time ``t`` is the exact quadratic

    ``|X + t V|^2 = |X|^2 + 2 t (X . V) + t^2 |V|^2``

so the closest-approach time is ``t_m = -(X . V) / |V|^2`` and the pair keeps
the safety distance ``d`` at all future times iff it is diverging
(``t_m <= 0``) or

    ``g = |V|^2 (|X|^2 - d^2) - (X . V)^2 >= 0``

which is ``|V|^2`` times the signed squared miss-distance margin.  All
functions here are pure and operate on immutable inputs; units are abstract
(think NM and NM/h) and angles are radians.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

__all__ = [
    "EPS_PARALLEL",
    "EPS_FEASIBILITY",
    "Aircraft",
    "Instance",
    "PairGeometry",
    "ApproachKind",
    "ClosestApproach",
    "PairReport",
    "FeasibilityReport",
    "pair_params",
    "relative_velocity",
    "closest_approach_time",
    "separation_lhs",
    "is_feasible",
]

# Below this squared relative speed a pair is treated as parallel: the
# separation is constant, so the pair is safe iff it starts separated
# (guaranteed by Instance validation).
EPS_PARALLEL = 1e-12

# Slack on g when classifying a pair as separated; g's units are
# length^2 * speed^2.
EPS_FEASIBILITY = 1e-6


@dataclass(frozen=True)
class Aircraft:
    """One aircraft: initial position, speed, heading, and deviation bounds."""

    x0: float
    y0: float
    v: float
    phi: float
    theta_min: float
    theta_max: float

    def __post_init__(self) -> None:
        if not self.v > 0:
            raise ValueError(f"speed must be positive, got {self.v}")
        if self.theta_min > self.theta_max:
            raise ValueError(
                f"empty deviation interval [{self.theta_min}, {self.theta_max}]"
            )
        if not math.isfinite(self.phi):
            raise ValueError("heading must be finite")
        if not (math.isfinite(self.x0) and math.isfinite(self.y0)):
            raise ValueError("position must be finite")


class InstanceError(ValueError):
    """Raised when instance data violates a validity requirement."""


@dataclass(frozen=True)
class Instance:
    """A deconfliction scenario: aircraft plus the common safety distance.

    Aircraft already closer than ``d`` at time zero make the scenario
    unsolvable by heading changes, so such data is rejected outright.
    """

    aircraft: tuple[Aircraft, ...]
    d: float
    id: str = "unnamed"

    def __post_init__(self) -> None:
        object.__setattr__(self, "aircraft", tuple(self.aircraft))
        if len(self.aircraft) < 2:
            raise InstanceError("an instance needs at least two aircraft")
        if not self.d > 0:
            raise InstanceError(f"safety distance must be positive, got {self.d}")
        n = len(self.aircraft)
        for i in range(n):
            for j in range(i + 1, n):
                a, b = self.aircraft[i], self.aircraft[j]
                dist = math.hypot(a.x0 - b.x0, a.y0 - b.y0)
                if dist < self.d:
                    raise InstanceError(
                        f"aircraft pair ({i + 1},{j + 1}) starts at distance "
                        f"{dist:.6g} < safety distance {self.d:.6g}"
                    )

    @property
    def n(self) -> int:
        return len(self.aircraft)

    def pairs(self) -> list[tuple[int, int]]:
        """All index pairs (i, j) with i < j, lexicographic."""
        n = self.n
        return [(i, j) for i in range(n) for j in range(i + 1, n)]

    def theta_bounds(self) -> tuple[list[float], list[float]]:
        lo = [a.theta_min for a in self.aircraft]
        hi = [a.theta_max for a in self.aircraft]
        return lo, hi

    def check_theta(self, theta: Sequence[float]) -> None:
        """Validate a heading-deviation vector against the per-aircraft box."""
        if len(theta) != self.n:
            raise ValueError(f"expected {self.n} deviations, got {len(theta)}")
        for k, (a, t) in enumerate(zip(self.aircraft, theta)):
            if not (a.theta_min - 1e-12 <= t <= a.theta_max + 1e-12):
                raise ValueError(
                    f"theta[{k}] = {t} outside [{a.theta_min}, {a.theta_max}]"
                )


@dataclass(frozen=True)
class PairGeometry:
    """Derived constants of a pair: C = |X|^2 - d^2, X = (D, E), H = C (vi^2 + vj^2)."""

    i: int
    j: int
    C: float
    D: float
    E: float
    H: float


def pair_params(inst: Instance, i: int, j: int) -> PairGeometry:
    """Constants of pair (i, j), i < j, from instance data."""
    n = inst.n
    if not (0 <= i < n and 0 <= j < n):
        raise IndexError(f"pair ({i},{j}) out of range for {n} aircraft")
    if i >= j:
        raise ValueError(f"pair indices must satisfy i < j, got ({i},{j})")
    ai, aj = inst.aircraft[i], inst.aircraft[j]
    D = ai.x0 - aj.x0
    E = ai.y0 - aj.y0
    C = D * D + E * E - inst.d * inst.d
    H = C * (ai.v * ai.v + aj.v * aj.v)
    return PairGeometry(i=i, j=j, C=C, D=D, E=E, H=H)


def relative_velocity(
    inst: Instance, i: int, j: int, theta: Sequence[float]
) -> tuple[float, float]:
    """Relative velocity V = Vi - Vj for deviated headings phi + theta."""
    ai, aj = inst.aircraft[i], inst.aircraft[j]
    psi_i = ai.phi + theta[i]
    psi_j = aj.phi + theta[j]
    vx = math.cos(psi_i) * ai.v - math.cos(psi_j) * aj.v
    vy = math.sin(psi_i) * ai.v - math.sin(psi_j) * aj.v
    return (vx, vy)


class ApproachKind(enum.Enum):
    CONVERGING = "converging"
    DIVERGING = "diverging"
    PARALLEL = "parallel"


@dataclass(frozen=True)
class ClosestApproach:
    """Closest-approach classification; ``time`` is None for parallel pairs."""

    kind: ApproachKind
    time: float | None

    @property
    def converging(self) -> bool:
        return self.kind is ApproachKind.CONVERGING


def closest_approach_time(
    inst: Instance, i: int, j: int, theta: Sequence[float], eps_v: float = EPS_PARALLEL
) -> ClosestApproach:
    """Time minimizing the pair distance, or a diverging/parallel marker.

    ``t_m = -(X . V) / |V|^2``.  A negative value means the aircraft already
    passed their closest point, so no future conflict is possible; a
    (squared) relative speed below ``eps_v`` means the separation is constant.
    """
    pg = pair_params(inst, i, j)
    vx, vy = relative_velocity(inst, i, j, theta)
    vv = vx * vx + vy * vy
    if vv < eps_v:
        return ClosestApproach(ApproachKind.PARALLEL, None)
    xv = pg.D * vx + pg.E * vy
    tm = -xv / vv
    kind = ApproachKind.CONVERGING if tm >= 0.0 else ApproachKind.DIVERGING
    return ClosestApproach(kind, tm)


def separation_lhs(inst: Instance, i: int, j: int, theta: Sequence[float]) -> float:
    """g = |V|^2 (|X|^2 - d^2) - (X . V)^2; g >= 0 iff miss distance >= d."""
    pg = pair_params(inst, i, j)
    vx, vy = relative_velocity(inst, i, j, theta)
    vv = vx * vx + vy * vy
    xv = pg.D * vx + pg.E * vy
    return vv * pg.C - xv * xv


@dataclass(frozen=True)
class PairReport:
    """Diagnostics for one pair at a fixed heading vector."""

    i: int
    j: int
    kind: ApproachKind
    t_m: float | None
    miss_distance: float
    g: float
    violated: bool


@dataclass(frozen=True)
class FeasibilityReport:
    feasible: bool
    pairs: tuple[PairReport, ...] = field(default_factory=tuple)

    @property
    def violations(self) -> tuple[PairReport, ...]:
        return tuple(p for p in self.pairs if p.violated)


def _pair_report(
    inst: Instance, i: int, j: int, theta: Sequence[float], eps_feas: float
) -> PairReport:
    pg = pair_params(inst, i, j)
    ai, aj = inst.aircraft[i], inst.aircraft[j]
    vx, vy = relative_velocity(inst, i, j, theta)
    vv = vx * vx + vy * vy
    xx = pg.D * pg.D + pg.E * pg.E
    if vv < EPS_PARALLEL:
        # Constant separation; initial distance decides (instances guarantee >= d).
        miss = math.sqrt(xx)
        return PairReport(i, j, ApproachKind.PARALLEL, None, miss,
                          0.0, miss < inst.d - eps_feas)
    xv = pg.D * vx + pg.E * vy
    tm = -xv / vv
    g = vv * pg.C - xv * xv
    if tm <= 0.0:
        # Already moving apart: the minimum future distance is the current one,
        # which instance validation guarantees to be >= d.
        kind = ApproachKind.DIVERGING if tm < 0.0 else ApproachKind.CONVERGING
        return PairReport(i, j, kind, tm, math.sqrt(xx), g, False)
    miss_sq = xx - xv * xv / vv
    miss = math.sqrt(max(miss_sq, 0.0))
    return PairReport(i, j, ApproachKind.CONVERGING, tm, miss, g, g < -eps_feas)


def is_feasible(
    inst: Instance,
    theta: Sequence[float],
    eps_feas: float = EPS_FEASIBILITY,
) -> FeasibilityReport:
    """Check the separation of every pair for a fixed heading-deviation vector.

    Feasible iff each pair is diverging/parallel or has ``g >= -eps_feas``.
    A theta outside the per-aircraft bounds is a usage error, distinct from
    an infeasible-but-valid heading vector.
    """
    inst.check_theta(theta)
    reports = []
    ok = True
    for i, j in inst.pairs():
        rep = _pair_report(inst, i, j, theta, eps_feas)
        reports.append(rep)
        ok = ok and not rep.violated
    return FeasibilityReport(feasible=ok, pairs=tuple(reports))
