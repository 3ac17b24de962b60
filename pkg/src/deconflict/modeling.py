"""Solver-independent algebraic models of the deconfliction problem.

Two formulations are built from the same instance data:

* m1 - the compact mixed-integer model: quadratic objective, relative
  velocity components as variables defined through sin/cos of the deviated
  headings, the product-form separation condition, the closest-approach time
  with its division kept verbatim, and the sign-coupling activation.

* m2 - the separable reformulation: a linear objective through the epigraph
  variable, per-pair univariate term variables bounded by their defining
  sinusoids, and the activation/separation disjunction expressed with the
  certified constants M, M^-, M^+ of a BigMBundle.

Models are immutable expression-tree containers that can be exported to an
AMPL-style ``.mod`` text or to a JSON structure that round-trips exactly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .geometry import Instance, pair_params
from .separable import BigMBundle, SeparableTerms

__all__ = [
    "Expr", "Const", "Var", "Neg", "Sum", "Sub", "Mul", "Div", "Pow", "Sin", "Cos",
    "Variable", "Constraint", "Objective", "ModelIR",
    "evaluate", "free_vars", "complete_assignment", "constraint_residuals",
    "build_m1", "build_m2", "export_model", "import_model", "model_filename",
    "MODEL_SCHEMA",
]

MODEL_SCHEMA = "deconflict.model.v1"


# --------------------------------------------------------------------------
# Expression trees
# --------------------------------------------------------------------------

class Expr:
    """Base class; nodes are frozen dataclasses compared structurally."""

    __slots__ = ()


@dataclass(frozen=True)
class Const(Expr):
    value: float


@dataclass(frozen=True)
class Var(Expr):
    name: str


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True)
class Sum(Expr):
    terms: tuple[Expr, ...]


@dataclass(frozen=True)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Mul(Expr):
    factors: tuple[Expr, ...]


@dataclass(frozen=True)
class Div(Expr):
    num: Expr
    den: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: int


@dataclass(frozen=True)
class Sin(Expr):
    arg: Expr


@dataclass(frozen=True)
class Cos(Expr):
    arg: Expr


def _sum(*terms: Expr) -> Expr:
    return Sum(tuple(terms))


def _mul(*factors: Expr) -> Expr:
    return Mul(tuple(factors))


def evaluate(expr: Expr, env: Mapping[str, float]) -> float:
    """Evaluate an expression tree under a full variable assignment."""
    if isinstance(expr, Const):
        return expr.value
    if isinstance(expr, Var):
        return env[expr.name]
    if isinstance(expr, Neg):
        return -evaluate(expr.arg, env)
    if isinstance(expr, Sum):
        return sum(evaluate(t, env) for t in expr.terms)
    if isinstance(expr, Sub):
        return evaluate(expr.left, env) - evaluate(expr.right, env)
    if isinstance(expr, Mul):
        out = 1.0
        for f in expr.factors:
            out *= evaluate(f, env)
        return out
    if isinstance(expr, Div):
        return evaluate(expr.num, env) / evaluate(expr.den, env)
    if isinstance(expr, Pow):
        return evaluate(expr.base, env) ** expr.exponent
    if isinstance(expr, Sin):
        return math.sin(evaluate(expr.arg, env))
    if isinstance(expr, Cos):
        return math.cos(evaluate(expr.arg, env))
    raise TypeError(f"unknown expression node {type(expr).__name__}")


def free_vars(expr: Expr) -> frozenset[str]:
    if isinstance(expr, Const):
        return frozenset()
    if isinstance(expr, Var):
        return frozenset((expr.name,))
    if isinstance(expr, Neg):
        return free_vars(expr.arg)
    if isinstance(expr, Sum):
        out: frozenset[str] = frozenset()
        for t in expr.terms:
            out |= free_vars(t)
        return out
    if isinstance(expr, Sub):
        return free_vars(expr.left) | free_vars(expr.right)
    if isinstance(expr, Mul):
        out = frozenset()
        for f in expr.factors:
            out |= free_vars(f)
        return out
    if isinstance(expr, Div):
        return free_vars(expr.num) | free_vars(expr.den)
    if isinstance(expr, Pow):
        return free_vars(expr.base)
    if isinstance(expr, (Sin, Cos)):
        return free_vars(expr.arg)
    raise TypeError(f"unknown expression node {type(expr).__name__}")


def trig_args(expr: Expr) -> list[Expr]:
    """Arguments of every sin/cos node in the tree."""
    out: list[Expr] = []

    def walk(e: Expr) -> None:
        if isinstance(e, (Sin, Cos)):
            out.append(e.arg)
            walk(e.arg)
        elif isinstance(e, Neg):
            walk(e.arg)
        elif isinstance(e, Sum):
            for t in e.terms:
                walk(t)
        elif isinstance(e, Sub):
            walk(e.left)
            walk(e.right)
        elif isinstance(e, Mul):
            for f in e.factors:
                walk(f)
        elif isinstance(e, Div):
            walk(e.num)
            walk(e.den)
        elif isinstance(e, Pow):
            walk(e.base)

    walk(expr)
    return out


def max_product_arity(expr: Expr) -> int:
    """Largest number of distinct variables multiplied together in one product."""
    best = 0

    def walk(e: Expr) -> None:
        nonlocal best
        if isinstance(e, Mul):
            best = max(best, len(free_vars(e)))
        if isinstance(e, Pow) and e.exponent >= 2:
            best = max(best, len(free_vars(e.base)))
        if isinstance(e, Neg):
            walk(e.arg)
        elif isinstance(e, Sum):
            for t in e.terms:
                walk(t)
        elif isinstance(e, Sub):
            walk(e.left)
            walk(e.right)
        elif isinstance(e, Mul):
            for f in e.factors:
                walk(f)
        elif isinstance(e, Div):
            walk(e.num)
            walk(e.den)
        elif isinstance(e, Pow):
            walk(e.base)
        elif isinstance(e, (Sin, Cos)):
            walk(e.arg)

    walk(expr)
    return best


# --------------------------------------------------------------------------
# Model container
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Variable:
    name: str
    kind: str = "continuous"  # or "binary"
    lb: float | None = None
    ub: float | None = None


@dataclass(frozen=True)
class Constraint:
    """Normalized constraint: expr RELATION rhs with a constant rhs."""

    name: str
    expr: Expr
    relation: str  # "<=", ">=", "=="
    rhs: float


@dataclass(frozen=True)
class Objective:
    sense: str  # "min"
    expr: Expr


@dataclass(frozen=True)
class ModelIR:
    """Immutable algebraic model.

    ``definitions`` lists the auxiliary variables in dependency order with
    the expression that completes them from (theta, y): equality-defined
    variables get their defining value, inequality-bounded term variables
    their defining extreme.  Used to evaluate feasibility of a (theta, y)
    point against the full constraint system.
    """

    name: str
    formulation: str  # "m1" | "m2"
    instance_id: str
    variables: tuple[Variable, ...]
    objective: Objective
    constraints: tuple[Constraint, ...]
    definitions: tuple[tuple[str, Expr], ...] = ()
    metadata: tuple[tuple[str, str], ...] = ()

    def __post_init__(self) -> None:
        declared = {v.name for v in self.variables}
        refs: set[str] = set(free_vars(self.objective.expr))
        for c in self.constraints:
            refs |= free_vars(c.expr)
        for _, e in self.definitions:
            refs |= free_vars(e)
        undeclared = refs - declared
        if undeclared:
            raise ValueError(f"undeclared variables referenced: {sorted(undeclared)}")

    def variable(self, name: str) -> Variable:
        for v in self.variables:
            if v.name == name:
                return v
        raise KeyError(name)


def complete_assignment(
    model: ModelIR, theta: Sequence[float], y: Mapping[tuple[int, int], int] | Sequence[int]
) -> dict[str, float]:
    """Full variable assignment from decisions (theta, y) via the definitions."""
    env: dict[str, float] = {}
    n = 0
    for v in model.variables:
        if v.name.startswith("theta_"):
            n += 1
    if len(theta) != n:
        raise ValueError(f"expected {n} theta values, got {len(theta)}")
    for k, t in enumerate(theta):
        env[f"theta_{k + 1}"] = float(t)
    if isinstance(y, Mapping):
        for (i, j), val in y.items():
            env[f"y_{i + 1}_{j + 1}"] = float(val)
    else:
        names = [v.name for v in model.variables if v.kind == "binary"]
        if len(y) != len(names):
            raise ValueError(f"expected {len(names)} binary values, got {len(y)}")
        for name, val in zip(names, y):
            env[name] = float(val)
    for name, expr in model.definitions:
        env[name] = evaluate(expr, env)
    return env


def constraint_residuals(
    model: ModelIR, env: Mapping[str, float], relative: bool = True
) -> dict[str, float]:
    """Signed slack per constraint; negative means violated.

    With relative=True each slack is scaled by max(1, |lhs|, |rhs|) so a
    single tolerance classifies constraints across magnitudes.
    """
    out: dict[str, float] = {}
    for c in model.constraints:
        val = evaluate(c.expr, env)
        if c.relation == "<=":
            slack = c.rhs - val
        elif c.relation == ">=":
            slack = val - c.rhs
        else:
            slack = -abs(val - c.rhs)
        if relative:
            slack /= max(1.0, abs(val), abs(c.rhs))
        out[c.name] = slack
    return out


# --------------------------------------------------------------------------
# Builders
# --------------------------------------------------------------------------

def _theta(i: int) -> Var:
    return Var(f"theta_{i + 1}")


def _psi(inst: Instance, i: int) -> Expr:
    return _sum(Const(inst.aircraft[i].phi), Var(f"theta_{i + 1}"))


def build_m1(inst: Instance) -> ModelIR:
    """The compact model: variables theta, V components, t^m, y per pair."""
    variables: list[Variable] = [
        Variable(f"theta_{k + 1}", "continuous", a.theta_min, a.theta_max)
        for k, a in enumerate(inst.aircraft)
    ]
    constraints: list[Constraint] = []
    definitions: list[tuple[str, Expr]] = []

    for i, j in inst.pairs():
        pg = pair_params(inst, i, j)
        ai, aj = inst.aircraft[i], inst.aircraft[j]
        tag = f"{i + 1}_{j + 1}"
        vmax = ai.v + aj.v
        vx, vy, tm, yv = Var(f"vx_{tag}"), Var(f"vy_{tag}"), Var(f"tm_{tag}"), Var(f"y_{tag}")
        variables += [
            Variable(vx.name, "continuous", -vmax, vmax),
            Variable(vy.name, "continuous", -vmax, vmax),
            Variable(tm.name, "continuous", None, None),
            Variable(yv.name, "binary", 0.0, 1.0),
        ]
        vx_expr = Sub(
            _mul(Cos(_psi(inst, i)), Const(ai.v)),
            _mul(Cos(_psi(inst, j)), Const(aj.v)),
        )
        vy_expr = Sub(
            _mul(Sin(_psi(inst, i)), Const(ai.v)),
            _mul(Sin(_psi(inst, j)), Const(aj.v)),
        )
        constraints.append(Constraint(f"vdef_x_{tag}", Sub(vx, vx_expr), "==", 0.0))
        constraints.append(Constraint(f"vdef_y_{tag}", Sub(vy, vy_expr), "==", 0.0))

        vv = _sum(Pow(vx, 2), Pow(vy, 2))
        xv = _sum(_mul(Const(pg.D), vx), _mul(Const(pg.E), vy))
        sep = _mul(yv, Sub(_mul(vv, Const(pg.C)), Pow(xv, 2)))
        constraints.append(Constraint(f"sep_{tag}", sep, ">=", 0.0))

        tm_expr = Neg(Div(xv, vv))  # division kept verbatim from the compact model
        constraints.append(Constraint(f"time_{tag}", Sub(tm, tm_expr), "==", 0.0))
        act = _mul(tm, Sub(_mul(Const(2.0), yv), Const(1.0)))
        constraints.append(Constraint(f"act_{tag}", act, ">=", 0.0))

        definitions += [(vx.name, vx_expr), (vy.name, vy_expr), (tm.name, tm_expr)]

    objective = Objective("min", Sum(tuple(Pow(_theta(k), 2) for k in range(inst.n))))
    return ModelIR(
        name=f"{inst.id}.m1",
        formulation="m1",
        instance_id=inst.id,
        variables=tuple(variables),
        objective=objective,
        constraints=tuple(constraints),
        definitions=tuple(definitions),
    )


def build_m2(
    inst: Instance, bigms: Mapping[tuple[int, int], BigMBundle] | Iterable[BigMBundle]
) -> ModelIR:
    """The separable model with epigraph objective and BigM activation.

    The activation band is emitted with the raw constants: the lower side is
    Omega^- + Omega^+ >= -M^-(1-y) with M^- = min(Omega^-) + min(Omega^+),
    which relaxes correctly at y=0 precisely when M^- >= 0 (true for
    converging pairs); pairs with negative M^- are listed in the metadata.
    """
    if not isinstance(bigms, Mapping):
        bigms = {(b.i, b.j): b for b in bigms}
    variables: list[Variable] = [
        Variable(f"theta_{k + 1}", "continuous", a.theta_min, a.theta_max)
        for k, a in enumerate(inst.aircraft)
    ]
    theta_cap = sum(
        max(a.theta_min * a.theta_min, a.theta_max * a.theta_max) for a in inst.aircraft
    )
    variables.append(Variable("Theta", "continuous", 0.0, theta_cap))
    constraints: list[Constraint] = []
    definitions: list[tuple[str, Expr]] = []
    negative_band: list[str] = []

    sum_sq = Sum(tuple(Pow(_theta(k), 2) for k in range(inst.n)))
    constraints.append(Constraint("epigraph", Sub(Var("Theta"), sum_sq), ">=", 0.0))

    for i, j in inst.pairs():
        key = (i, j)
        if key not in bigms:
            raise ValueError(f"missing BigM bundle for pair ({i + 1},{j + 1})")
        bm = bigms[key]
        pg = pair_params(inst, i, j)
        st = SeparableTerms.from_pair(pg, inst)
        ai, aj = inst.aircraft[i], inst.aircraft[j]
        tag = f"{i + 1}_{j + 1}"

        phim, phip = Var(f"phim_{tag}"), Var(f"phip_{tag}")
        gam, dlt = Var(f"gam_{tag}"), Var(f"del_{tag}")
        lamm, lamp = Var(f"lamm_{tag}"), Var(f"lamp_{tag}")
        omm, omp = Var(f"omm_{tag}"), Var(f"omp_{tag}")
        yv = Var(f"y_{tag}")

        pil, pih = st.psi_i_domain(inst)
        pjl, pjh = st.psi_j_domain(inst)
        variables += [
            Variable(phim.name, "continuous", pil - pjh, pih - pjl),
            Variable(phip.name, "continuous", pil + pjl, pih + pjh),
            Variable(gam.name, "continuous", bm.gamma_min.value, bm.gamma_max.value),
            Variable(dlt.name, "continuous", bm.delta_min.value, bm.delta_max.value),
            Variable(lamm.name, "continuous", bm.lam_minus_min.value, bm.lam_minus_max.value),
            Variable(lamp.name, "continuous", bm.lam_plus_min.value, bm.lam_plus_max.value),
            Variable(omm.name, "continuous", bm.omega_minus_min.value, bm.omega_minus_max.value),
            Variable(omp.name, "continuous", bm.omega_plus_min.value, bm.omega_plus_max.value),
            Variable(yv.name, "binary", 0.0, 1.0),
        ]

        phim_expr = Sub(_psi(inst, i), _psi(inst, j))
        phip_expr = _sum(_psi(inst, i), _psi(inst, j))
        constraints.append(Constraint(f"phim_def_{tag}", Sub(phim, phim_expr), "==", 0.0))
        constraints.append(Constraint(f"phip_def_{tag}", Sub(phip, phip_expr), "==", 0.0))

        # Single-aircraft terms: negated squares of the deviated heading sinusoid.
        gam_expr = _sum(
            Neg(Pow(_mul(Cos(_psi(inst, i)), Const(pg.D), Const(ai.v)), 2)),
            Neg(Pow(_mul(Sin(_psi(inst, i)), Const(pg.E), Const(ai.v)), 2)),
            Neg(_mul(Cos(_psi(inst, i)), Sin(_psi(inst, i)),
                     Const(2.0 * pg.D * pg.E * ai.v * ai.v))),
        )
        dlt_expr = _sum(
            Neg(Pow(_mul(Cos(_psi(inst, j)), Const(pg.D), Const(aj.v)), 2)),
            Neg(Pow(_mul(Sin(_psi(inst, j)), Const(pg.E), Const(aj.v)), 2)),
            Neg(_mul(Cos(_psi(inst, j)), Sin(_psi(inst, j)),
                     Const(2.0 * pg.D * pg.E * aj.v * aj.v))),
        )
        k1 = ai.v * aj.v * (pg.D * pg.D + pg.E * pg.E - 2.0 * pg.C)
        k2 = ai.v * aj.v * (pg.D * pg.D - pg.E * pg.E)
        k3 = 2.0 * ai.v * aj.v * pg.D * pg.E
        lamm_expr = _mul(Cos(phim), Const(k1))
        lamp_expr = _sum(_mul(Cos(phip), Const(k2)), _mul(Sin(phip), Const(k3)))
        constraints.append(Constraint(f"gam_ub_{tag}", Sub(gam, gam_expr), "<=", 0.0))
        constraints.append(Constraint(f"del_ub_{tag}", Sub(dlt, dlt_expr), "<=", 0.0))
        constraints.append(Constraint(f"lamm_ub_{tag}", Sub(lamm, lamm_expr), "<=", 0.0))
        constraints.append(Constraint(f"lamp_ub_{tag}", Sub(lamp, lamp_expr), "<=", 0.0))

        # Separation: gam + del + lamm + lamp + H >= M (1 - y), written with
        # the M y term on the left and the constant M as right-hand side.
        sep = _sum(gam, dlt, lamm, lamp, Const(st.H), _mul(Const(bm.M), yv))
        constraints.append(Constraint(f"sep_{tag}", sep, ">=", bm.M))

        # Activation band: -M^- (1 - y) <= omm + omp <= M^+ y.
        act_lo = _sum(omm, omp, _mul(Const(-bm.M_minus), yv))
        constraints.append(Constraint(f"act_lo_{tag}", act_lo, ">=", -bm.M_minus))
        act_hi = _sum(omm, omp, _mul(Const(-bm.M_plus), yv))
        constraints.append(Constraint(f"act_hi_{tag}", act_hi, "<=", 0.0))
        if bm.M_minus < 0.0:
            negative_band.append(tag)

        omm_expr = Sub(
            Neg(_mul(Const(pg.D), Cos(_psi(inst, i)), Const(ai.v))),
            _mul(Const(pg.E), Sin(_psi(inst, i)), Const(ai.v)),
        )
        omp_expr = _sum(
            _mul(Const(pg.D), Cos(_psi(inst, j)), Const(aj.v)),
            _mul(Const(pg.E), Sin(_psi(inst, j)), Const(aj.v)),
        )
        constraints.append(Constraint(f"omm_def_{tag}", Sub(omm, omm_expr), "==", 0.0))
        constraints.append(Constraint(f"omp_def_{tag}", Sub(omp, omp_expr), "==", 0.0))

        definitions += [
            (phim.name, phim_expr),
            (phip.name, phip_expr),
            (gam.name, gam_expr),
            (dlt.name, dlt_expr),
            (lamm.name, lamm_expr),
            (lamp.name, lamp_expr),
            (omm.name, omm_expr),
            (omp.name, omp_expr),
        ]

    definitions.append(("Theta", sum_sq))
    metadata: tuple[tuple[str, str], ...] = ()
    if negative_band:
        metadata = (("negative_m_minus_pairs", ",".join(negative_band)),)
    return ModelIR(
        name=f"{inst.id}.m2",
        formulation="m2",
        instance_id=inst.id,
        variables=tuple(variables),
        objective=Objective("min", Var("Theta")),
        constraints=tuple(constraints),
        definitions=tuple(definitions),
        metadata=metadata,
    )


# --------------------------------------------------------------------------
# Export / import
# --------------------------------------------------------------------------

def _fmt(x: float) -> str:
    return repr(float(x))


def _to_text(expr: Expr) -> str:
    if isinstance(expr, Const):
        return _fmt(expr.value)
    if isinstance(expr, Var):
        return expr.name
    if isinstance(expr, Neg):
        return f"-({_to_text(expr.arg)})"
    if isinstance(expr, Sum):
        return " + ".join(_to_text(t) for t in expr.terms)
    if isinstance(expr, Sub):
        return f"{_to_text(expr.left)} - ({_to_text(expr.right)})"
    if isinstance(expr, Mul):
        return "*".join(f"({_to_text(f)})" for f in expr.factors)
    if isinstance(expr, Div):
        return f"({_to_text(expr.num)})/({_to_text(expr.den)})"
    if isinstance(expr, Pow):
        return f"({_to_text(expr.base)})^{expr.exponent}"
    if isinstance(expr, Sin):
        return f"sin({_to_text(expr.arg)})"
    if isinstance(expr, Cos):
        return f"cos({_to_text(expr.arg)})"
    raise TypeError(f"node {type(expr).__name__} has no text form")


def _to_mod(model: ModelIR) -> str:
    lines = [f"# {model.name} ({model.formulation}) for instance {model.instance_id}"]
    for v in model.variables:
        if v.kind == "binary":
            lines.append(f"var {v.name} binary;")
            continue
        bounds = []
        if v.lb is not None:
            bounds.append(f">= {_fmt(v.lb)}")
        if v.ub is not None:
            bounds.append(f"<= {_fmt(v.ub)}")
        suffix = (" " + ", ".join(bounds)) if bounds else ""
        lines.append(f"var {v.name}{suffix};")
    lines.append(f"minimize obj: {_to_text(model.objective.expr)};")
    rel = {"<=": "<=", ">=": ">=", "==": "="}
    for c in model.constraints:
        lines.append(f"subject to {c.name}: {_to_text(c.expr)} {rel[c.relation]} {_fmt(c.rhs)};")
    return "\n".join(lines) + "\n"


def _expr_to_json(expr: Expr):
    if isinstance(expr, Const):
        return {"t": "const", "value": expr.value}
    if isinstance(expr, Var):
        return {"t": "var", "name": expr.name}
    if isinstance(expr, Neg):
        return {"t": "neg", "arg": _expr_to_json(expr.arg)}
    if isinstance(expr, Sum):
        return {"t": "sum", "terms": [_expr_to_json(t) for t in expr.terms]}
    if isinstance(expr, Sub):
        return {"t": "sub", "left": _expr_to_json(expr.left), "right": _expr_to_json(expr.right)}
    if isinstance(expr, Mul):
        return {"t": "mul", "factors": [_expr_to_json(f) for f in expr.factors]}
    if isinstance(expr, Div):
        return {"t": "div", "num": _expr_to_json(expr.num), "den": _expr_to_json(expr.den)}
    if isinstance(expr, Pow):
        return {"t": "pow", "base": _expr_to_json(expr.base), "exponent": expr.exponent}
    if isinstance(expr, Sin):
        return {"t": "sin", "arg": _expr_to_json(expr.arg)}
    if isinstance(expr, Cos):
        return {"t": "cos", "arg": _expr_to_json(expr.arg)}
    raise TypeError(f"node {type(expr).__name__} has no JSON form")


def _expr_from_json(data) -> Expr:
    t = data["t"]
    if t == "const":
        return Const(float(data["value"]))
    if t == "var":
        return Var(data["name"])
    if t == "neg":
        return Neg(_expr_from_json(data["arg"]))
    if t == "sum":
        return Sum(tuple(_expr_from_json(x) for x in data["terms"]))
    if t == "sub":
        return Sub(_expr_from_json(data["left"]), _expr_from_json(data["right"]))
    if t == "mul":
        return Mul(tuple(_expr_from_json(x) for x in data["factors"]))
    if t == "div":
        return Div(_expr_from_json(data["num"]), _expr_from_json(data["den"]))
    if t == "pow":
        return Pow(_expr_from_json(data["base"]), int(data["exponent"]))
    if t == "sin":
        return Sin(_expr_from_json(data["arg"]))
    if t == "cos":
        return Cos(_expr_from_json(data["arg"]))
    raise ValueError(f"unknown expression tag {t!r}")


def _to_json(model: ModelIR) -> str:
    data = {
        "schema": MODEL_SCHEMA,
        "name": model.name,
        "formulation": model.formulation,
        "instance_id": model.instance_id,
        "variables": [
            {"name": v.name, "kind": v.kind, "lb": v.lb, "ub": v.ub}
            for v in model.variables
        ],
        "objective": {"sense": model.objective.sense, "expr": _expr_to_json(model.objective.expr)},
        "constraints": [
            {
                "name": c.name,
                "expr": _expr_to_json(c.expr),
                "relation": c.relation,
                "rhs": c.rhs,
            }
            for c in model.constraints
        ],
        "definitions": [[name, _expr_to_json(e)] for name, e in model.definitions],
        "metadata": [[k, v] for k, v in model.metadata],
    }
    return json.dumps(data, indent=2) + "\n"


def export_model(model: ModelIR, format: str = "mod") -> str:
    """Deterministic text form: "mod" (AMPL-style) or "json" (round-trips)."""
    if format == "mod":
        return _to_mod(model)
    if format == "json":
        return _to_json(model)
    raise ValueError(f"unsupported export format {format!r}")


def import_model(text: str) -> ModelIR:
    """Parse the JSON structured format back into an identical ModelIR."""
    data = json.loads(text)
    if data.get("schema") != MODEL_SCHEMA:
        raise ValueError(f"unsupported model schema {data.get('schema')!r}")
    return ModelIR(
        name=data["name"],
        formulation=data["formulation"],
        instance_id=data["instance_id"],
        variables=tuple(
            Variable(v["name"], v["kind"], v["lb"], v["ub"]) for v in data["variables"]
        ),
        objective=Objective(data["objective"]["sense"], _expr_from_json(data["objective"]["expr"])),
        constraints=tuple(
            Constraint(c["name"], _expr_from_json(c["expr"]), c["relation"], float(c["rhs"]))
            for c in data["constraints"]
        ),
        definitions=tuple((name, _expr_from_json(e)) for name, e in data["definitions"]),
        metadata=tuple((k, v) for k, v in data["metadata"]),
    )


def model_filename(instance_id: str, formulation: str, format: str = "mod") -> str:
    ext = "mod" if format == "mod" else "model.json"
    return f"{instance_id}.{formulation}.{ext}"
