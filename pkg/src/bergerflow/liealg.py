"""Exact arithmetic on SU(2), su(2), SO(3) and so(3).

SU(2) is stored as unit quaternions ``q0 + q1 i + q2 j + q3 k`` and su(2) as
pure quaternions ``x1 i + x2 j + x3 k``.  With this convention ``i j = k`` and
the Lie bracket is the commutator, so ``[i, j] = 2k``.  The so(3) side uses
plain numpy arrays (3-vectors and 3x3 matrices) identified with
``(R^3, x)`` by the usual hat map.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

#: Below this angle ``sin(r)/r`` and friends switch to their Taylor series.
SERIES_THRESHOLD = 1e-4


@dataclass(frozen=True)
class AlgebraVector:
    """Element ``x1 i + x2 j + x3 k`` of su(2)."""

    x1: float
    x2: float
    x3: float

    def __add__(self, other: AlgebraVector) -> AlgebraVector:
        return AlgebraVector(self.x1 + other.x1, self.x2 + other.x2, self.x3 + other.x3)

    def __sub__(self, other: AlgebraVector) -> AlgebraVector:
        return AlgebraVector(self.x1 - other.x1, self.x2 - other.x2, self.x3 - other.x3)

    def __neg__(self) -> AlgebraVector:
        return AlgebraVector(-self.x1, -self.x2, -self.x3)

    def __mul__(self, s: float) -> AlgebraVector:
        return AlgebraVector(s * self.x1, s * self.x2, s * self.x3)

    __rmul__ = __mul__

    def norm(self) -> float:
        return math.sqrt(self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3)

    def as_array(self) -> np.ndarray:
        return np.array([self.x1, self.x2, self.x3])

    @classmethod
    def from_array(cls, a) -> AlgebraVector:
        return cls(float(a[0]), float(a[1]), float(a[2]))


ZERO = AlgebraVector(0.0, 0.0, 0.0)
I = AlgebraVector(1.0, 0.0, 0.0)
J = AlgebraVector(0.0, 1.0, 0.0)
K = AlgebraVector(0.0, 0.0, 1.0)


@dataclass(frozen=True)
class GroupElement:
    """Unit quaternion ``q0 + q1 i + q2 j + q3 k`` representing a point of SU(2)."""

    q0: float
    q1: float
    q2: float
    q3: float

    def __mul__(self, other: GroupElement) -> GroupElement:
        return group_mul(self, other)

    def __neg__(self) -> GroupElement:
        return GroupElement(-self.q0, -self.q1, -self.q2, -self.q3)

    def norm(self) -> float:
        return math.sqrt(self.q0**2 + self.q1**2 + self.q2**2 + self.q3**2)

    def normalized(self) -> GroupElement:
        n = self.norm()
        return GroupElement(self.q0 / n, self.q1 / n, self.q2 / n, self.q3 / n)

    def inverse(self) -> GroupElement:
        return group_inv(self)

    def as_array(self) -> np.ndarray:
        return np.array([self.q0, self.q1, self.q2, self.q3])

    @classmethod
    def from_array(cls, a) -> GroupElement:
        return cls(float(a[0]), float(a[1]), float(a[2]), float(a[3]))


IDENTITY = GroupElement(1.0, 0.0, 0.0, 0.0)


def bracket(x: AlgebraVector, y: AlgebraVector) -> AlgebraVector:
    """Lie bracket ``[X, Y] = XY - YX``; in coordinates ``2 (x cross y)``."""
    return AlgebraVector(
        2.0 * (x.x2 * y.x3 - x.x3 * y.x2),
        2.0 * (x.x3 * y.x1 - x.x1 * y.x3),
        2.0 * (x.x1 * y.x2 - x.x2 * y.x1),
    )


def killing_inner(x: AlgebraVector, y: AlgebraVector) -> float:
    """Normalized Killing metric ``-tr(XY)/2``, i.e. the Euclidean dot product."""
    return x.x1 * y.x1 + x.x2 * y.x2 + x.x3 * y.x3


def _sinc(r: float) -> float:
    if r < SERIES_THRESHOLD:
        r2 = r * r
        return 1.0 - r2 / 6.0 + r2 * r2 / 120.0
    return math.sin(r) / r


def exp_group(x: AlgebraVector) -> GroupElement:
    """Closed-form exponential ``exp(X) = cos|X| + (sin|X|/|X|) X``."""
    r = x.norm()
    s = _sinc(r)
    return GroupElement(math.cos(r), s * x.x1, s * x.x2, s * x.x3)


def group_mul(a: GroupElement, b: GroupElement) -> GroupElement:
    """Hamilton product ``ab`` (not renormalized, see :func:`group_prod`)."""
    return GroupElement(
        a.q0 * b.q0 - a.q1 * b.q1 - a.q2 * b.q2 - a.q3 * b.q3,
        a.q0 * b.q1 + a.q1 * b.q0 + a.q2 * b.q3 - a.q3 * b.q2,
        a.q0 * b.q2 - a.q1 * b.q3 + a.q2 * b.q0 + a.q3 * b.q1,
        a.q0 * b.q3 + a.q1 * b.q2 - a.q2 * b.q1 + a.q3 * b.q0,
    )


def group_prod(*factors: GroupElement) -> GroupElement:
    """Product of several group elements, renormalized once at the end."""
    out = factors[0]
    for f in factors[1:]:
        out = group_mul(out, f)
    return out.normalized() if len(factors) > 1 else out


def group_inv(a: GroupElement) -> GroupElement:
    return GroupElement(a.q0, -a.q1, -a.q2, -a.q3)


def _half_angle(u: np.ndarray, v: np.ndarray) -> float:
    # 2*atan2(|u-v|, |u+v|) is the angle between unit vectors u and v,
    # accurate down to rounding (arccos of the dot product is not).
    return 2.0 * math.atan2(float(np.linalg.norm(u - v)), float(np.linalg.norm(u + v)))


def group_distance(a: GroupElement, b: GroupElement) -> float:
    """Sign-insensitive distance ``arccos(min(1, |<a, b>|))``.

    Vanishes iff ``a = +-b``, i.e. when both project to the same rotation.
    """
    u, v = a.as_array(), b.as_array()
    if float(np.dot(u, v)) < 0.0:
        v = -v
    return _half_angle(u, v)


def su2_distance(a: GroupElement, b: GroupElement) -> float:
    """Sign-sensitive distance ``arccos(<a, b>)``; zero iff ``a = b`` in SU(2)."""
    return _half_angle(a.as_array(), b.as_array())


def _as_pure(x: AlgebraVector) -> GroupElement:
    return GroupElement(0.0, x.x1, x.x2, x.x3)


def adjoint(a: GroupElement, x: AlgebraVector) -> AlgebraVector:
    """``Ad(a) X = a X a^-1``."""
    p = group_mul(group_mul(a, _as_pure(x)), group_inv(a))
    return AlgebraVector(p.q1, p.q2, p.q3)


def double_cover(a: GroupElement) -> np.ndarray:
    """Matrix of ``Ad(a)`` in the basis {i, j, k}; ``double_cover(-a) == double_cover(a)``."""
    w, x, y, z = a.q0, a.q1, a.q2, a.q3
    return np.array(
        [
            [w * w + x * x - y * y - z * z, 2 * (x * y - w * z), 2 * (x * z + w * y)],
            [2 * (x * y + w * z), w * w - x * x + y * y - z * z, 2 * (y * z - w * x)],
            [2 * (x * z - w * y), 2 * (y * z + w * x), w * w - x * x - y * y + z * z],
        ]
    )


def double_cover_diff(x: AlgebraVector) -> np.ndarray:
    """Differential of :func:`double_cover` at the identity: ``i -> 2 e1`` etc."""
    return 2.0 * x.as_array()


def hat(w) -> np.ndarray:
    """3-vector to skew-symmetric matrix, ``hat(w) @ v == cross(w, v)``."""
    return np.array([[0.0, -w[2], w[1]], [w[2], 0.0, -w[0]], [-w[1], w[0], 0.0]])


def vee(m: np.ndarray) -> np.ndarray:
    return np.array([m[2, 1], m[0, 2], m[1, 0]])


def exp_so3(w) -> np.ndarray:
    """Rodrigues' formula for ``exp(hat(w))`` with a small-angle series guard."""
    w = np.asarray(w, dtype=float)
    th = float(np.linalg.norm(w))
    W = hat(w)
    if th < SERIES_THRESHOLD:
        t2 = th * th
        a = 1.0 - t2 / 6.0 + t2 * t2 / 120.0
        b = 0.5 - t2 / 24.0 + t2 * t2 / 720.0
    else:
        a = math.sin(th) / th
        b = (1.0 - math.cos(th)) / (th * th)
    return np.eye(3) + a * W + b * (W @ W)


def hopf_project(a: GroupElement, c: float) -> np.ndarray:
    """Hopf projection ``Ad(a)(k / sqrt(c+3))`` onto the sphere of radius ``1/sqrt(c+3)``."""
    if not c > -3.0:
        raise ValueError("c must exceed -3")
    return double_cover(a)[:, 2] / math.sqrt(c + 3.0)


# Vectorized quaternion helpers for the integrators; arrays have shape (..., 4).


def quat_mul_arrays(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a0, a1, a2, a3 = a[..., 0], a[..., 1], a[..., 2], a[..., 3]
    b0, b1, b2, b3 = b[..., 0], b[..., 1], b[..., 2], b[..., 3]
    return np.stack(
        [
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        ],
        axis=-1,
    )
