"""Verification suites run by ``bergerflow verify``.

Each suite returns a list of :class:`Check` records (name, max deviation,
tolerance).  Parameter grids and tolerances default to :mod:`.defaults`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import defaults
from .berger import (
    E1,
    E2,
    E3,
    BergerContext,
    FrameVector,
    check_nabla_phi_xi,
    eta,
    lorentz_phi,
    nat_red_check,
    reeb,
    ricci,
    scalar,
    sectional,
    standard_field_check,
)
from .flows import (
    FlowParams,
    lorentz_residual_analytic,
    magnetic_closed_form,
    magnetic_curve,
    omega_closed_form_array,
    rk4_group_endpoints,
)
from .liealg import group_distance, su2_distance
from .rigidbody import berger_correspondence, gyrostat_residual, kappa_from_flow, omegas_to_so3

SUITES = ("curvature", "natred", "contact", "lorentz", "oracle", "gyrostat")


@dataclass(frozen=True)
class Check:
    name: str
    deviation: float
    tol: float
    info: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.deviation <= self.tol)


@dataclass(frozen=True)
class Grid:
    c: Sequence[float] = defaults.GRID_C
    q: Sequence[float] = defaults.GRID_Q
    theta: Sequence[float] = defaults.GRID_THETA

    def tuples(self):
        return list(itertools.product(self.c, self.q, self.theta))


def _tag(**kw) -> str:
    return ",".join(f"{k}={v!r}" for k, v in kw.items())


def curvature_suite(grid: Grid) -> list[Check]:
    tol = defaults.TOLERANCES["curvature"]
    out = []
    for c in grid.c:
        ctx = BergerContext(c)
        k = (sectional(E1, E2, ctx), sectional(E1, E3, ctx), sectional(E2, E3, ctx))
        ric = ricci(ctx)
        sc = scalar(ctx)
        expected = (c, 1.0, 1.0, c + 1.0, c + 1.0, 2.0, 2.0 * (c + 2.0))
        dev = max(abs(a - b) for a, b in zip(k + ric + (sc,), expected))
        info = {"K12": k[0], "K13": k[1], "K23": k[2], "Ric11": ric[0], "Ric22": ric[1], "Ric33": ric[2], "scal": sc}
        out.append(Check(f"curvature[{_tag(c=c)}]", dev, tol, info))
    return out


def natred_suite(grid: Grid) -> list[Check]:
    tol = defaults.TOLERANCES["natred"]
    return [Check(f"natred[{_tag(c=c)}]", nat_red_check(BergerContext(c)).max_deviation, tol) for c in grid.c]


def contact_suite(grid: Grid) -> list[Check]:
    tol = defaults.TOLERANCES["contact"]
    out = []
    rng = np.random.default_rng(0)
    for c in grid.c:
        ctx = BergerContext(c)
        out.append(Check(f"nabla_phi_xi[{_tag(c=c)}]", check_nabla_phi_xi(ctx).max_deviation, tol))
    dev = 0.0
    for v in rng.normal(size=(100, 3)):
        v = FrameVector.from_array(v)
        lhs = lorentz_phi(lorentz_phi(v))
        rhs = -1.0 * v + eta(v) * reeb()
        dev = max(dev, (lhs - rhs).norm())
    out.append(Check("phi_squared", dev, tol))
    out.append(Check("standard_field[c=1.0]", standard_field_check(BergerContext(1.0)).max_deviation, defaults.TOLERANCES["standard_field"]))
    return out


def lorentz_suite(grid: Grid) -> list[Check]:
    tol = defaults.TOLERANCES["lorentz"]
    times = np.linspace(0.0, defaults.LORENTZ_T, defaults.LORENTZ_SAMPLES)
    out = []
    for c, q, th in grid.tuples():
        p = FlowParams.from_angles(c, q, th)
        rep = lorentz_residual_analytic(magnetic_curve(p), p.ctx, q, times)
        out.append(Check(f"lorentz[{_tag(c=c, q=q, theta=th)}]", rep.max_norm, tol))
    return out


def oracle_suite(grid: Grid) -> list[Check]:
    tol = defaults.TOLERANCES["oracle"]
    params = [FlowParams.from_angles(c, q, th) for c, q, th in grid.tuples()]
    t = defaults.ORACLE_T
    ends = rk4_group_endpoints(params, t, defaults.ORACLE_STEP)
    out = []
    for p, s in zip(params, ends):
        d = group_distance(magnetic_closed_form(t, p), s.gamma)
        out.append(Check(f"oracle[{_tag(c=p.ctx.c, q=p.q, theta=p.theta)}]", d, tol))
    out.append(order_check(params))
    return out


def order_check(params: Sequence[FlowParams]) -> Check:
    """Observed RK4 order from the coarse/fine endpoint errors (pooled over params)."""
    t = defaults.ORACLE_T
    coarse, fine = defaults.ORDER_STEPS
    exact = [magnetic_closed_form(t, p) for p in params]
    e1 = max(su2_distance(a, s.gamma) for a, s in zip(exact, rk4_group_endpoints(params, t, coarse)))
    e2 = max(su2_distance(a, s.gamma) for a, s in zip(exact, rk4_group_endpoints(params, t, fine)))
    order = math.log2(e1 / e2) if e2 > 0 else float("inf")
    lo, hi = defaults.ORDER_RANGE
    dev = 0.0 if lo <= order <= hi else min(abs(order - lo), abs(order - hi))
    return Check("rk4_order", dev, 0.0, {"order": order, "err_coarse": e1, "err_fine": e2})


def gyrostat_defects(p: FlowParams, kappa_sign: int = 1) -> float:
    """Max central-difference gyrostat residual of the projected closed-form trajectory.

    ``kappa_sign = 1`` uses :func:`berger_correspondence`; ``-1`` uses the
    sign forced by the flow (:func:`kappa_from_flow`).
    """
    n = round(defaults.GYRO_WINDOW / defaults.GYRO_DT)
    ts = np.linspace(0.0, defaults.GYRO_WINDOW, n + 1)
    w = omegas_to_so3(omega_closed_form_array(ts, p), p.ctx)
    inertia, g = berger_correspondence(p.ctx.c, p.q)
    if kappa_sign < 0:
        g = kappa_from_flow(p.ctx.c, p.q)
    return float(np.abs(gyrostat_residual(ts, w, inertia, g)).max())


def gyrostat_suite(grid: Grid) -> list[Check]:
    tol = defaults.TOLERANCES["gyrostat"]
    out = []
    for c, q, th in grid.tuples():
        p = FlowParams.from_angles(c, q, th)
        tag = _tag(c=c, q=q, theta=th)
        out.append(Check(f"gyrostat[{tag}]", gyrostat_defects(p, 1), tol))
        out.append(Check(f"gyrostat_flow_sign[{tag}]", gyrostat_defects(p, -1), tol))
    return out


_RUNNERS = {
    "curvature": curvature_suite,
    "natred": natred_suite,
    "contact": contact_suite,
    "lorentz": lorentz_suite,
    "oracle": oracle_suite,
    "gyrostat": gyrostat_suite,
}


def run_suite(name: str, grid: Grid | None = None) -> list[Check]:
    grid = grid or Grid()
    if name == "all":
        return [chk for s in SUITES for chk in _RUNNERS[s](grid)]
    if name not in _RUNNERS:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES + ('all',))}")
    return _RUNNERS[name](grid)
