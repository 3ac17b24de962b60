"""CP / RCP instance families and instance file I/O.

The Circle Problem (CP) places n aircraft uniformly on a circle, all heading
to its center at a common speed: every pair flies through the center at the
same instant, so the undeviated instance is maximally conflicting.  The
Random Circle Problem (RCP) perturbs radii, headings, and speeds with seeded
uniform draws.

Default parameters are standard en-route values (radius 200 NM, speed
400 NM/h, safety distance 5 NM, deviation bounds +/- pi/6); they are
configurable and not tied to any published instance set.  Randomness comes
from numpy's PCG64 so that a seed reproduces the same instance on any
platform.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .geometry import Aircraft, Instance, InstanceError

__all__ = [
    "CpConfig",
    "RcpConfig",
    "gen_cp",
    "gen_rcp",
    "read_instance",
    "write_instance",
    "instance_to_dict",
    "instance_from_dict",
    "SCHEMA",
]

SCHEMA = "deconflict.instance.v1"

DEFAULT_RADIUS = 200.0
DEFAULT_SPEED = 400.0
DEFAULT_SAFETY = 5.0
DEFAULT_THETA_BOUND = math.pi / 6


@dataclass(frozen=True)
class CpConfig:
    """Circle Problem parameters; theta_bound is the symmetric deviation bound."""

    n: int
    radius: float = DEFAULT_RADIUS
    speed: float = DEFAULT_SPEED
    d: float = DEFAULT_SAFETY
    theta_bound: float = DEFAULT_THETA_BOUND

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError("need at least two aircraft")
        if not self.radius > self.d:
            raise ValueError("radius must exceed the safety distance")
        if not self.speed > 0:
            raise ValueError("speed must be positive")
        if not self.theta_bound >= 0:
            raise ValueError("theta bound must be nonnegative")


@dataclass(frozen=True)
class RcpConfig:
    """CP parameters plus seeded jitter intervals.

    speed_jitter is a relative half-width (0.05 = +/-5%), heading_jitter an
    absolute half-width in radians, position_jitter a radial half-width in
    length units.
    """

    cp: CpConfig
    seed: int = 0
    speed_jitter: float = 0.05
    heading_jitter: float = math.pi / 6
    position_jitter: float = 10.0
    max_retries: int = 100

    def __post_init__(self) -> None:
        for name in ("speed_jitter", "heading_jitter", "position_jitter"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise ValueError(f"{name} must be finite and nonnegative")
        if self.speed_jitter >= 1.0:
            raise ValueError("speed jitter must keep speeds positive")


def gen_cp(cfg: CpConfig, id: str | None = None) -> Instance:
    """Aircraft k at angle 2*pi*k/n on the circle, heading to the center."""
    min_chord = 2.0 * cfg.radius * math.sin(math.pi / cfg.n)
    if min_chord < cfg.d:
        raise InstanceError(
            f"radius {cfg.radius:g} too small for n={cfg.n}: closest pair starts "
            f"at {min_chord:.6g} < safety distance {cfg.d:g}"
        )
    aircraft = []
    for k in range(cfg.n):
        alpha = 2.0 * math.pi * k / cfg.n
        aircraft.append(
            Aircraft(
                x0=cfg.radius * math.cos(alpha),
                y0=cfg.radius * math.sin(alpha),
                v=cfg.speed,
                phi=(alpha + math.pi) % (2.0 * math.pi),
                theta_min=-cfg.theta_bound,
                theta_max=cfg.theta_bound,
            )
        )
    return Instance(aircraft=tuple(aircraft), d=cfg.d, id=id or f"cp-n{cfg.n}")


def gen_rcp(cfg: RcpConfig, id: str | None = None) -> Instance:
    """Seeded random perturbation of a CP instance, validated at t = 0.

    Draws (radius, heading, speed) offsets per aircraft in a fixed order, so
    a seed fully determines the instance; instances violating the initial
    separation are redrawn from the same stream up to max_retries times.
    """
    cp = cfg.cp
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    name = id or f"rcp-n{cp.n}-s{cfg.seed}"
    last_err: InstanceError | None = None
    for _ in range(cfg.max_retries):
        aircraft = []
        for k in range(cp.n):
            alpha = 2.0 * math.pi * k / cp.n
            dr = rng.uniform(-cfg.position_jitter, cfg.position_jitter)
            dphi = rng.uniform(-cfg.heading_jitter, cfg.heading_jitter)
            dv = rng.uniform(-cfg.speed_jitter, cfg.speed_jitter)
            r = cp.radius + dr
            aircraft.append(
                Aircraft(
                    x0=r * math.cos(alpha),
                    y0=r * math.sin(alpha),
                    v=cp.speed * (1.0 + dv),
                    phi=(alpha + math.pi + dphi) % (2.0 * math.pi),
                    theta_min=-cp.theta_bound,
                    theta_max=cp.theta_bound,
                )
            )
        try:
            return Instance(aircraft=tuple(aircraft), d=cp.d, id=name)
        except InstanceError as err:
            last_err = err
    raise InstanceError(
        f"could not draw a valid RCP instance in {cfg.max_retries} tries "
        f"(seed {cfg.seed}): {last_err}"
    )


def instance_to_dict(inst: Instance) -> dict:
    return {
        "schema": SCHEMA,
        "id": inst.id,
        "d": inst.d,
        "aircraft": [
            {
                "x0": a.x0,
                "y0": a.y0,
                "v": a.v,
                "phi": a.phi,
                "theta_min": a.theta_min,
                "theta_max": a.theta_max,
            }
            for a in inst.aircraft
        ],
    }


def instance_from_dict(data: dict) -> Instance:
    if not isinstance(data, dict):
        raise InstanceError("instance file must hold a JSON object")
    schema = data.get("schema")
    if schema != SCHEMA:
        raise InstanceError(f"unsupported instance schema {schema!r}, expected {SCHEMA!r}")
    try:
        aircraft = tuple(
            Aircraft(
                x0=float(a["x0"]),
                y0=float(a["y0"]),
                v=float(a["v"]),
                phi=float(a["phi"]),
                theta_min=float(a["theta_min"]),
                theta_max=float(a["theta_max"]),
            )
            for a in data["aircraft"]
        )
        return Instance(aircraft=aircraft, d=float(data["d"]), id=str(data.get("id", "unnamed")))
    except (KeyError, TypeError, ValueError) as err:
        if isinstance(err, InstanceError):
            raise
        raise InstanceError(f"malformed instance file: {err}") from err


def write_instance(inst: Instance, path: str | Path) -> Path:
    """Write an instance file (.inst.json); bytes are a pure function of the data."""
    path = Path(path)
    path.write_text(json.dumps(instance_to_dict(inst), indent=2) + "\n")
    return path


def read_instance(path: str | Path) -> Instance:
    """Parse and validate an instance file; separation violations name the pair."""
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as err:
        raise InstanceError(f"malformed instance file {path}: {err}") from err
    return instance_from_dict(data)
