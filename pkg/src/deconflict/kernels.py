"""Numeric kernel backend selection.

Uses the compiled extension when built, the pure-Python/numpy twin otherwise.
Set ``DECONFLICT_PURE_PYTHON=1`` to force the fallback (used by the backend
benchmark and the cross-backend tests).
"""

from __future__ import annotations

import math
import os

import numpy as np

from .geometry import Instance, pair_params

if os.environ.get("DECONFLICT_PURE_PYTHON") == "1":
    from . import _kernels_py as backend
else:
    try:
        from . import _kernels as backend  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as backend

BACKEND = backend.BACKEND

STATUS_SATISFIED = backend.STATUS_SATISFIED
STATUS_VIOLATED = backend.STATUS_VIOLATED
STATUS_UNDECIDED = backend.STATUS_UNDECIDED

sinusoid_min_max = backend.sinusoid_min_max
neg_square_min_max = backend.neg_square_min_max
pair_box_bounds = backend.pair_box_bounds
box_obj_lb = backend.box_obj_lb
classify_box = backend.classify_box
point_margins = backend.point_margins
batch_point_margins = backend.batch_point_margins
batch_pair_terms = backend.batch_pair_terms
oracle_scan_min = backend.oracle_scan_min
batch_oracle_scan_min = backend.batch_oracle_scan_min

PAIR_COLUMNS = (
    "i", "j", "D", "E", "C", "H", "vi", "vj", "phii", "phij",
    "K1", "K2", "K3", "scale_g", "scale_w",
)


def pure_backend():
    """The pure-Python backend module (always importable)."""
    from . import _kernels_py

    return _kernels_py


def compiled_backend():
    """The compiled backend module, or None when not built."""
    try:
        from . import _kernels  # type: ignore[attr-defined]

        return _kernels
    except ImportError:
        return None


def build_pair_table(inst: Instance) -> np.ndarray:
    """Pack per-pair constants into the row layout the kernels consume."""
    pairs = inst.pairs()
    P = np.empty((len(pairs), len(PAIR_COLUMNS)))
    for k, (i, j) in enumerate(pairs):
        pg = pair_params(inst, i, j)
        ai, aj = inst.aircraft[i], inst.aircraft[j]
        vi, vj = ai.v, aj.v
        D, E, C = pg.D, pg.E, pg.C
        r = math.hypot(D, E)
        vsum = vi + vj
        P[k] = (
            i, j, D, E, C, pg.H, vi, vj, ai.phi, aj.phi,
            vi * vj * (D * D + E * E - 2.0 * C),
            vi * vj * (D * D - E * E),
            2.0 * vi * vj * D * E,
            abs(C) * vsum * vsum + (r * vsum) * (r * vsum),
            r * vsum,
        )
    return P
