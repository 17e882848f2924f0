"""Rigid bodies and gyrostats on SO(3), and their relation to Berger trajectories.

Vectors are numpy 3-arrays in the body frame {e1, e2, e3}; rotations are
3x3 numpy arrays.  The correspondence sends ``Omega = A e1 + B e2 + C e3`` to
``omega = (sqrt(c+3) A, sqrt(c+3) B, (c+3) C / 2)`` and ``gamma`` to its image
under the double cover.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .berger import BergerContext, FrameVector
from .flows import IntegrationError, TrajectorySample
from .liealg import double_cover, exp_so3, hat


@dataclass(frozen=True)
class InertiaSpec:
    """Principal moments of inertia."""

    I1: float
    I2: float
    I3: float

    def __post_init__(self):
        if not (self.I1 > 0 and self.I2 > 0 and self.I3 > 0):
            raise ValueError("moments of inertia must be positive")

    def as_array(self) -> np.ndarray:
        return np.array([self.I1, self.I2, self.I3])


@dataclass(frozen=True)
class GyrostatSpec:
    """Constant gyrostatic momentum kappa (body frame)."""

    kappa: tuple[float, float, float]

    def __post_init__(self):
        if not all(math.isfinite(k) for k in self.kappa):
            raise ValueError("kappa must be finite")

    def as_array(self) -> np.ndarray:
        return np.array(self.kappa, dtype=float)


def euler_rhs(omega, inertia: InertiaSpec) -> np.ndarray:
    """Free rigid body: ``I omega' = (I omega) x omega``."""
    w = np.asarray(omega, dtype=float)
    Iv = inertia.as_array()
    return np.cross(Iv * w, w) / Iv


def gyrostat_rhs(omega, inertia: InertiaSpec, g: GyrostatSpec) -> np.ndarray:
    """Zhukovskii-Volterra gyrostat: ``omega' = I^-1 ((I omega + kappa) x omega)``."""
    w = np.asarray(omega, dtype=float)
    Iv = inertia.as_array()
    return np.cross(Iv * w + g.as_array(), w) / Iv


def energy(omega, inertia: InertiaSpec) -> float:
    w = np.asarray(omega, dtype=float)
    return 0.5 * float(np.dot(inertia.as_array() * w, w))


def gyrostat_invariant(omega, inertia: InertiaSpec, g: GyrostatSpec) -> float:
    """``|mu + kappa|^2``, conserved by the gyrostat equation."""
    v = inertia.as_array() * np.asarray(omega, dtype=float) + g.as_array()
    return float(np.dot(v, v))


def _split_axis(omega0) -> tuple[np.ndarray, np.ndarray]:
    # e3 is the symmetry axis
    w = np.asarray(omega0, dtype=float)
    return np.array([w[0], w[1], 0.0]), np.array([0.0, 0.0, w[2]])


def symmetric_top_generators(omega0, I1: float, I3: float) -> tuple[np.ndarray, np.ndarray]:
    """Generators X, Y with ``R(t) = exp(t X) exp(t Y)`` for a top with ``I1 = I2``."""
    if not (I1 > 0 and I3 > 0):
        raise ValueError("moments of inertia must be positive")
    w1, w3 = _split_axis(omega0)
    return w1 + (I3 / I1) * w3, ((I1 - I3) / I1) * w3


def symmetric_top_solution(t: float, omega0, I1: float, I3: float) -> np.ndarray:
    """Attitude of a symmetric top (I1 = I2, symmetry axis e3) starting at the identity."""
    x, y = symmetric_top_generators(omega0, I1, I3)
    return exp_so3(t * x) @ exp_so3(t * y)


def symmetric_top_body_velocity(t: float, omega0, I1: float, I3: float) -> np.ndarray:
    """``vee(R^-1 R')`` for :func:`symmetric_top_solution`, i.e. ``exp(-tY) x + y``."""
    x, y = symmetric_top_generators(omega0, I1, I3)
    return exp_so3(-t * y) @ x + y


def rk4_rigid_body(rhs: Callable[[np.ndarray], np.ndarray], omega0, t_end: float, step: float):
    """RK4 for ``R' = R hat(omega)``, ``omega' = rhs(omega)`` from ``R(0) = 1``.

    Returns ``(times, rotations, omegas)`` on the uniform grid with step
    ``t_end / round(t_end / step)``.
    """
    if not (step > 0 and t_end > 0):
        raise ValueError("step and t_end must be positive")
    n = max(1, round(t_end / step))
    h = t_end / n
    R = np.eye(3)
    w = np.asarray(omega0, dtype=float).copy()

    def f(R, w):
        return R @ hat(w), rhs(w)

    Rs, ws = [R.copy()], [w.copy()]
    for i in range(n):
        k1R, k1w = f(R, w)
        k2R, k2w = f(R + 0.5 * h * k1R, w + 0.5 * h * k1w)
        k3R, k3w = f(R + 0.5 * h * k2R, w + 0.5 * h * k2w)
        k4R, k4w = f(R + h * k3R, w + h * k3w)
        R = R + (h / 6.0) * (k1R + 2 * k2R + 2 * k3R + k4R)
        w = w + (h / 6.0) * (k1w + 2 * k2w + 2 * k3w + k4w)
        # project back onto SO(3) via the polar factor
        u, _, vt = np.linalg.svd(R)
        R = u @ vt
        if not (np.all(np.isfinite(R)) and np.all(np.isfinite(w))):
            raise IntegrationError(f"non-finite state at step {i + 1}")
        Rs.append(R.copy())
        ws.append(w.copy())
    return np.arange(n + 1) * h, Rs, ws


def berger_inertia(c: float) -> InertiaSpec:
    ctx = BergerContext(c)
    return InertiaSpec(*ctx.inertia)


def berger_correspondence(c: float, q: float) -> tuple[InertiaSpec, GyrostatSpec]:
    """Inertia ``(4/(c+3), 4/(c+3), 16/(c+3)^2)`` and gyrostat ``kappa = (4q/(c+3)) e3``."""
    inertia = berger_inertia(c)
    return inertia, GyrostatSpec((0.0, 0.0, 4.0 * q / (c + 3.0)))


def kappa_from_flow(c: float, q: float) -> GyrostatSpec:
    """Gyrostat forced by the magnetized Euler-Arnold system under the projection.

    With ``mu' + omega x mu = (4q/sqrt(c+3)) (B, -A, 0)`` and
    ``omega x kappa = sqrt(c+3) kappa_3 (B, -A, 0)`` one needs
    ``kappa_3 = -4q/(c+3)``: the opposite sign to :func:`berger_correspondence`.
    """
    BergerContext(c)
    return GyrostatSpec((0.0, 0.0, -4.0 * q / (c + 3.0)))


def omega_to_so3(omega: FrameVector, ctx: BergerContext) -> np.ndarray:
    s = math.sqrt(ctx.c + 3.0)
    return np.array([s * omega.A, s * omega.B, (ctx.c + 3.0) * omega.C / 2.0])


def project_trajectory(samples: Sequence[TrajectorySample], ctx: BergerContext) -> list[tuple[np.ndarray, np.ndarray]]:
    """Rotation ``double_cover(gamma)`` and body angular velocity for each sample."""
    return [(double_cover(s.gamma), omega_to_so3(s.omega, ctx)) for s in samples]


def gyrostat_defect(omega, omega_dot, inertia: InertiaSpec, g: GyrostatSpec) -> np.ndarray:
    """``mu' + omega x (mu + kappa)`` with ``mu = I omega``."""
    Iv = inertia.as_array()
    w = np.asarray(omega, dtype=float)
    return Iv * np.asarray(omega_dot, dtype=float) + np.cross(w, Iv * w + g.as_array())


def gyrostat_residual(times: Sequence[float], omegas: Sequence[np.ndarray], inertia: InertiaSpec, g: GyrostatSpec) -> np.ndarray:
    """Residual at interior points of a uniform grid, ``mu'`` by central differences."""
    ts = np.asarray(times, dtype=float)
    if len(ts) < 3:
        raise ValueError("need at least 3 samples")
    dts = np.diff(ts)
    dt = float(dts.mean())
    if np.max(np.abs(dts - dt)) > 1e-9 * max(1.0, abs(dt)):
        raise ValueError("central differences need a uniform time grid")
    W = np.asarray(omegas, dtype=float)
    return gyrostat_defect(W[1:-1], (W[2:] - W[:-2]) / (2.0 * dt), inertia, g)


def rotation_body_velocity(times: Sequence[float], rotations: Sequence[np.ndarray]) -> np.ndarray:
    """``vee(R^T R')`` at interior points by central differences."""
    ts = np.asarray(times, dtype=float)
    out = []
    for i in range(1, len(ts) - 1):
        dR = (rotations[i + 1] - rotations[i - 1]) / (ts[i + 1] - ts[i - 1])
        m = rotations[i].T @ dR
        out.append(0.5 * np.array([m[2, 1] - m[1, 2], m[0, 2] - m[2, 0], m[1, 0] - m[0, 1]]))
    return np.array(out)


def omegas_to_so3(omegas: np.ndarray, ctx: BergerContext) -> np.ndarray:
    """Row-wise :func:`omega_to_so3` for an (N, 3) array of frame components."""
    s = math.sqrt(ctx.c + 3.0)
    return np.asarray(omegas, dtype=float) * np.array([s, s, (ctx.c + 3.0) / 2.0])
