"""Geodesics and contact magnetic trajectories of M^3(c) through the identity.

Closed forms are products of one-parameter subgroups, represented by
:class:`HomogeneousCurve`.  Body velocity and acceleration of such products
are obtained analytically, so the Lorentz residual of a closed-form
trajectory involves no numerical differentiation.  An RK4 integrator for the
coupled system ``gamma' = gamma Omega``, ``Omega' = mea_rhs(Omega)`` serves as
an independent oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .berger import (
    BergerContext,
    FrameVector,
    ProductAlgebraVector,
    algebra_to_frame,
    frame_to_algebra,
    levi_civita,
    lorentz_phi,
)
from .liealg import (
    IDENTITY,
    AlgebraVector,
    GroupElement,
    adjoint,
    bracket,
    exp_group,
    group_inv,
    group_prod,
    quat_mul_arrays,
)

UNIT_SPEED_TOL = 1e-12


class IntegrationError(RuntimeError):
    """The numerical state became non-finite."""


@dataclass(frozen=True)
class FlowParams:
    """Curvature context, charge and unit initial angular velocity ``Omega(0)``."""

    ctx: BergerContext
    q: float
    omega0: FrameVector

    def __post_init__(self):
        if abs(self.omega0.norm() - 1.0) > UNIT_SPEED_TOL:
            raise ValueError(f"omega0 must have unit norm (|omega0| = {self.omega0.norm()!r})")

    @classmethod
    def from_angles(cls, c: float, q: float, theta: float, psi: float = 0.0) -> FlowParams:
        """Omega(0) = (sin(theta) cos(psi), sin(theta) sin(psi), cos(theta))."""
        st = math.sin(theta)
        return cls(BergerContext(c), q, FrameVector(st * math.cos(psi), st * math.sin(psi), math.cos(theta)))

    @property
    def theta(self) -> float:
        """Contact angle."""
        return math.atan2(math.hypot(self.omega0.A, self.omega0.B), self.omega0.C)

    @property
    def q_tilde(self) -> float:
        """Rotation rate of (A, B): ``q + (c-1)/2 cos(theta)``."""
        return self.q + (self.ctx.c - 1.0) / 2.0 * self.omega0.C


@dataclass(frozen=True)
class TrajectorySample:
    t: float
    gamma: GroupElement
    omega: FrameVector


# Euler-Arnold right-hand sides


def ea_rhs(omega: FrameVector, ctx: BergerContext) -> FrameVector:
    """Euler-Arnold system: A' = (c-1)/2 C B, B' = -(c-1)/2 C A, C' = 0."""
    k = (ctx.c - 1.0) / 2.0 * omega.C
    return FrameVector(k * omega.B, -k * omega.A, 0.0)


def mea_rhs(omega: FrameVector, ctx: BergerContext, q: float) -> FrameVector:
    """Magnetized Euler-Arnold system; the charge adds q to the rotation rate."""
    k = q + (ctx.c - 1.0) / 2.0 * omega.C
    return FrameVector(k * omega.B, -k * omega.A, 0.0)


def omega_closed_form(t: float, p: FlowParams) -> FrameVector:
    """Angular velocity along the trajectory: (A0, B0) rotated by ``-q_tilde t``."""
    qt = p.q_tilde * t
    cs, sn = math.cos(qt), math.sin(qt)
    a0, b0 = p.omega0.A, p.omega0.B
    return FrameVector(a0 * cs + b0 * sn, -a0 * sn + b0 * cs, p.omega0.C)


def omega_dot_closed_form(t: float, p: FlowParams) -> FrameVector:
    """Time derivative of :func:`omega_closed_form`, differentiated by hand."""
    qt = p.q_tilde * t
    cs, sn = math.cos(qt), math.sin(qt)
    a0, b0, k = p.omega0.A, p.omega0.B, p.q_tilde
    return FrameVector(k * (-a0 * sn + b0 * cs), k * (-a0 * cs - b0 * sn), 0.0)


# homogeneous curves


@dataclass(frozen=True)
class HomogeneousCurve:
    """``gamma(t) = exp(t Y_1) exp(t Y_2) ... exp(t Y_n)`` in SU(2)."""

    factors: tuple[AlgebraVector, ...]

    def at(self, t: float) -> GroupElement:
        return group_prod(*(exp_group(t * y) for y in self.factors))

    def _velocity_and_acceleration(self, t: float) -> tuple[AlgebraVector, AlgebraVector]:
        # Walk from the last factor: with P the tail product and Z = Ad(P^-1) Y,
        # Omega = Z + Omega_tail and Z' = -[Omega_tail, Z].
        omega = AlgebraVector(0.0, 0.0, 0.0)
        omega_dot = AlgebraVector(0.0, 0.0, 0.0)
        tail = IDENTITY
        for y in reversed(self.factors):
            z = adjoint(group_inv(tail), y)
            omega_dot = omega_dot - bracket(omega, z)
            omega = omega + z
            tail = group_prod(exp_group(t * y), tail)
        return omega, omega_dot

    def velocity(self, t: float) -> AlgebraVector:
        """Body velocity ``gamma^-1 gamma'``."""
        return self._velocity_and_acceleration(t)[0]

    def acceleration(self, t: float) -> AlgebraVector:
        """Time derivative of the body velocity."""
        return self._velocity_and_acceleration(t)[1]


def _k_elem(x: float, ctx: BergerContext) -> AlgebraVector:
    """``x e3`` as an element of su(2)."""
    return AlgebraVector(0.0, 0.0, x * ctx.s3)


def exp_product(a: ProductAlgebraVector, ctx: BergerContext) -> tuple[AlgebraVector, AlgebraVector]:
    """Generators (in G) of ``t -> exp(t a) . o`` for the action ``(g, k) x = g x k^-1``."""
    return frame_to_algebra(a.g, ctx), _k_elem(-a.k, ctx)


def geodesic_curve(omega0: FrameVector, ctx: BergerContext) -> HomogeneousCurve:
    """``exp_G(t(X_m + 4/(c+3) X_k)) exp_K(t (c-1)/(c+3) X_k)`` with ``X = Omega(0)``."""
    c = ctx.c
    xk = omega0.C
    first = FrameVector(omega0.A, omega0.B, 4.0 / (c + 3.0) * xk)
    return HomogeneousCurve((frame_to_algebra(first, ctx), _k_elem((c - 1.0) / (c + 3.0) * xk, ctx)))


def geodesic_closed_form(t: float, omega0: FrameVector, ctx: BergerContext) -> GroupElement:
    return geodesic_curve(omega0, ctx).at(t)


def magnetic_initial_vector(p: FlowParams) -> FrameVector:
    """The vector X whose geodesic, right-translated by the charged Reeb flow, is the trajectory.

    ``Omega(0) = X + (q/2) xi``, so ``X = Omega(0) - (q/2) e3``.
    """
    return FrameVector(p.omega0.A, p.omega0.B, p.omega0.C - p.q / 2.0)


def charged_reeb_generator(q: float, ctx: BergerContext) -> AlgebraVector:
    """Generator of the charged Reeb flow ``exp_K(t (q/2) xi)``."""
    return _k_elem(q / 2.0, ctx)


def magnetic_curve(p: FlowParams) -> HomogeneousCurve:
    """Homogeneous geodesic with initial velocity X, right-translated by the charged Reeb flow."""
    geo = geodesic_curve(magnetic_initial_vector(p), p.ctx)
    return HomogeneousCurve(geo.factors + (charged_reeb_generator(p.q, p.ctx),))


def magnetic_closed_form(t: float, p: FlowParams) -> GroupElement:
    return magnetic_curve(p).at(t)


def two_factor_curve(p: FlowParams) -> HomogeneousCurve:
    """Two-factor form ``exp_G(tW) exp_K(-tV)``, ``V = sigma e3``, ``sigma = (1-c)w/4 - q/2``.

    W = (A0, B0, w) is recovered from Omega(0) via ``w = 4 (C0 - q/2) / (c+3)``.
    """
    c, q = p.ctx.c, p.q
    w = 4.0 * (p.omega0.C - q / 2.0) / (c + 3.0)
    sigma = (1.0 - c) * w / 4.0 - q / 2.0
    W = FrameVector(p.omega0.A, p.omega0.B, w)
    return HomogeneousCurve((frame_to_algebra(W, p.ctx), _k_elem(-sigma, p.ctx)))


def round_sphere_form(t: float, omega0: FrameVector, q: float) -> GroupElement:
    """Trajectory on the round sphere (c = 1), written directly in su(2).

    ``exp_G(t(X + (q/2) xi)) exp_K(t (q/2) xi)`` with ``X = Omega(0) - q xi``;
    at c = 1 the frame and the quaternion basis coincide.
    """
    x = AlgebraVector(omega0.A, omega0.B, omega0.C - q)
    half = AlgebraVector(0.0, 0.0, q / 2.0)
    return group_prod(exp_group(t * (x + half)), exp_group(t * half))


def fibration_charge(q: float, ctx: BergerContext) -> float:
    """Charge to use in the fibration formula so that it describes charge ``q`` here.

    The field ``F^zeta`` with ``zeta = (xi/2, xi/2)`` differs from the contact
    field by the normalization of xi and by the orientation convention for
    the Lorentz force; matching rotation rates of Omega gives ``-4q/(c+3)``.
    """
    return -4.0 * q / (ctx.c + 3.0)


def fibration_curve(p: FlowParams) -> HomogeneousCurve:
    """Trajectory from the homogeneous-fibration formula over the Hopf fibration.

    ``exp_L{t(X_a + beta X_b + q' zeta)} exp_L{t(1-beta)(X_b + (q'/beta) zeta)} . o``
    with ``beta = 4/(c+3)``, ``X = Omega(0)`` split into m and k parts, and
    ``q' = fibration_charge(q)``.  L = G x K acts by ``(g, k) x = g x k^-1``.
    """
    ctx = p.ctx
    beta = 4.0 / (ctx.c + 3.0)
    qa = fibration_charge(p.q, ctx)
    zeta = ProductAlgebraVector(FrameVector(0.0, 0.0, 0.5), 0.5)
    xa = ProductAlgebraVector(FrameVector(p.omega0.A, p.omega0.B, 0.0), 0.0)
    xb = ProductAlgebraVector(FrameVector(0.0, 0.0, p.omega0.C), 0.0)
    first = xa + beta * xb + qa * zeta
    second = (1.0 - beta) * (xb + (qa / beta) * zeta)
    g1, k1 = exp_product(first, ctx)
    g2, k2 = exp_product(second, ctx)
    # (g1 g2) . o . (k1 k2)^-1 ; the k-generators returned are already negated
    return HomogeneousCurve((g1, g2, k2, k1))


def fibration_closed_form(t: float, p: FlowParams) -> GroupElement:
    return fibration_curve(p).at(t)


def sample_curve(curve: HomogeneousCurve, ctx: BergerContext, times: Sequence[float]) -> list[TrajectorySample]:
    return [TrajectorySample(float(t), curve.at(t), algebra_to_frame(curve.velocity(t), ctx)) for t in times]


def closed_form_samples(p: FlowParams, times: Sequence[float]) -> list[TrajectorySample]:
    """Group elements from the closed form; angular velocity from the Euler-Arnold solution."""
    curve = magnetic_curve(p)
    return [TrajectorySample(float(t), curve.at(t), omega_closed_form(t, p)) for t in times]


# RK4 oracle


def _rk4_run(quat: np.ndarray, om: np.ndarray, c: np.ndarray, q: np.ndarray, h: float, n: int, every: int):
    """Integrate a batch of states.  Shapes: quat (N,4), om (N,3), c and q (N,)."""
    s1 = np.sqrt(c + 3.0) / 2.0
    s3 = (c + 3.0) / 4.0
    half = (c - 1.0) / 2.0

    def rhs(qu, w):
        pure = np.stack([np.zeros_like(w[:, 0]), s1 * w[:, 0], s1 * w[:, 1], s3 * w[:, 2]], axis=-1)
        dq = quat_mul_arrays(qu, pure)
        k = q + half * w[:, 2]
        dw = np.stack([k * w[:, 1], -k * w[:, 0], np.zeros_like(k)], axis=-1)
        return dq, dw

    out_q = [quat.copy()]
    out_w = [om.copy()]
    with np.errstate(over="ignore", invalid="ignore"):
        for step in range(1, n + 1):
            k1q, k1w = rhs(quat, om)
            k2q, k2w = rhs(quat + 0.5 * h * k1q, om + 0.5 * h * k1w)
            k3q, k3w = rhs(quat + 0.5 * h * k2q, om + 0.5 * h * k2w)
            k4q, k4w = rhs(quat + h * k3q, om + h * k3w)
            quat = quat + (h / 6.0) * (k1q + 2.0 * k2q + 2.0 * k3q + k4q)
            om = om + (h / 6.0) * (k1w + 2.0 * k2w + 2.0 * k3w + k4w)
            quat = quat / np.linalg.norm(quat, axis=-1, keepdims=True)
            if not (np.all(np.isfinite(quat)) and np.all(np.isfinite(om))):
                raise IntegrationError(f"non-finite state at step {step}")
            if step % every == 0 or step == n:
                out_q.append(quat.copy())
                out_w.append(om.copy())
    return out_q, out_w


def _grid(t_end: float, step: float) -> tuple[int, float]:
    if not (step > 0 and t_end > 0 and math.isfinite(step) and math.isfinite(t_end)):
        raise ValueError("step and t_end must be positive and finite")
    n = max(1, round(t_end / step))
    return n, t_end / n


def rk4_group_integrate(p: FlowParams, t_end: float, step: float, every: int = 1) -> list[TrajectorySample]:
    """Classical RK4 on the 7-dimensional state (quaternion, frame components).

    The step is adjusted to ``t_end / round(t_end / step)`` so the grid lands
    on ``t_end``.  Samples are emitted every ``every`` steps (and at the end).
    """
    return rk4_group_batch([p], t_end, step, every)[0]


def rk4_group_batch(params: Sequence[FlowParams], t_end: float, step: float, every: int = 1) -> list[list[TrajectorySample]]:
    """:func:`rk4_group_integrate` for many parameter sets, as one vectorized batch."""
    if every < 1:
        raise ValueError("every must be >= 1")
    n, h = _grid(t_end, step)
    quat = np.tile([1.0, 0.0, 0.0, 0.0], (len(params), 1))
    om = np.array([p.omega0.as_array() for p in params])
    c = np.array([p.ctx.c for p in params])
    q = np.array([p.q for p in params])
    qs, ws = _rk4_run(quat, om, c, q, h, n, every)
    steps = [i for i in range(0, n + 1) if i % every == 0 or i == n]
    return [
        [TrajectorySample(i * h, GroupElement.from_array(a[j]), FrameVector.from_array(b[j])) for i, a, b in zip(steps, qs, ws)]
        for j in range(len(params))
    ]


def rk4_group_endpoints(params: Sequence[FlowParams], t_end: float, step: float) -> list[TrajectorySample]:
    """Endpoints of many RK4 runs, integrated together as one vectorized batch."""
    n, h = _grid(t_end, step)
    quat = np.tile([1.0, 0.0, 0.0, 0.0], (len(params), 1))
    om = np.array([p.omega0.as_array() for p in params])
    c = np.array([p.ctx.c for p in params])
    q = np.array([p.q for p in params])
    qs, ws = _rk4_run(quat, om, c, q, h, n, every=n)
    return [
        TrajectorySample(n * h, GroupElement.from_array(a), FrameVector.from_array(b))
        for a, b in zip(qs[-1], ws[-1])
    ]


# Lorentz residual


@dataclass(frozen=True)
class LorentzReport:
    times: list[float]
    residuals: list[FrameVector] = field(repr=False)

    @property
    def max_norm(self) -> float:
        return max((r.norm() for r in self.residuals), default=0.0)


def lorentz_defect(omega: FrameVector, omega_dot: FrameVector, ctx: BergerContext, q: float) -> FrameVector:
    """Body-frame value of ``nabla_gamma' gamma' - q phi gamma'``.

    For a left-invariant frame this is ``Omega' + nabla_Omega Omega - q phi Omega``.
    """
    return omega_dot + levi_civita(omega, omega, ctx) - q * lorentz_phi(omega)


def lorentz_residual(samples: Sequence[TrajectorySample], ctx: BergerContext, q: float) -> LorentzReport:
    """Residual at interior samples, with ``Omega'`` from central differences."""
    if len(samples) < 3:
        raise ValueError("finite-difference residual needs at least 3 samples")
    ts = np.array([s.t for s in samples])
    dts = np.diff(ts)
    dt = float(dts.mean())
    if np.max(np.abs(dts - dt)) > 1e-9 * max(1.0, abs(dt)):
        raise ValueError("finite-difference residual needs a uniform time grid")
    out = []
    for i in range(1, len(samples) - 1):
        dot = (samples[i + 1].omega - samples[i - 1].omega) * (1.0 / (2.0 * dt))
        out.append(lorentz_defect(samples[i].omega, dot, ctx, q))
    return LorentzReport([float(t) for t in ts[1:-1]], out)


def lorentz_residual_analytic(curve: HomogeneousCurve, ctx: BergerContext, q: float, times: Sequence[float]) -> LorentzReport:
    """Residual of a closed-form curve using its exact body velocity and acceleration."""
    out = []
    for t in times:
        om, om_dot = curve._velocity_and_acceleration(t)
        out.append(lorentz_defect(algebra_to_frame(om, ctx), algebra_to_frame(om_dot, ctx), ctx, q))
    return LorentzReport([float(t) for t in times], out)


def omega_closed_form_array(times, p: FlowParams) -> np.ndarray:
    """Vectorized :func:`omega_closed_form`; returns an (N, 3) array."""
    ts = np.asarray(times, dtype=float)
    qt = p.q_tilde * ts
    cs, sn = np.cos(qt), np.sin(qt)
    a0, b0 = p.omega0.A, p.omega0.B
    return np.stack([a0 * cs + b0 * sn, -a0 * sn + b0 * cs, np.full_like(ts, p.omega0.C)], axis=-1)
