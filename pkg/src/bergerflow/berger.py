"""The Berger sphere family M^3(c) on SU(2).

Everything is expressed in the left-invariant orthonormal frame

    e1 = s1 i,  e2 = s1 j,  e3 = s3 k,   s1 = sqrt(c+3)/2,  s3 = (c+3)/4,

so vectors are :class:`FrameVector` triples ``(A, B, C)`` and the metric is
the Euclidean one on components.  The connection is taken from its table and
curvature is computed from the connection; nothing downstream is hard-coded.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .liealg import AlgebraVector


@dataclass(frozen=True)
class BergerContext:
    """Curvature parameter ``c > -3`` and its derived constants."""

    c: float

    def __post_init__(self):
        if not (math.isfinite(self.c) and self.c > -3.0):
            raise ValueError(f"c must exceed -3 (got {self.c!r})")

    @property
    def s1(self) -> float:
        """Scale of e1, e2 over i, j."""
        return math.sqrt(self.c + 3.0) / 2.0

    @property
    def s3(self) -> float:
        """Scale of e3 over k."""
        return (self.c + 3.0) / 4.0

    @property
    def inertia(self) -> tuple[float, float, float]:
        """Eigenvalues of the inertia operator on {i, j, k}."""
        i1 = 4.0 / (self.c + 3.0)
        return (i1, i1, i1 * i1)


@dataclass(frozen=True)
class FrameVector:
    """Components ``(A, B, C)`` with respect to the frame {e1, e2, e3}."""

    A: float
    B: float
    C: float

    def __add__(self, other: FrameVector) -> FrameVector:
        return FrameVector(self.A + other.A, self.B + other.B, self.C + other.C)

    def __sub__(self, other: FrameVector) -> FrameVector:
        return FrameVector(self.A - other.A, self.B - other.B, self.C - other.C)

    def __neg__(self) -> FrameVector:
        return FrameVector(-self.A, -self.B, -self.C)

    def __mul__(self, s: float) -> FrameVector:
        return FrameVector(s * self.A, s * self.B, s * self.C)

    __rmul__ = __mul__

    def norm(self) -> float:
        return math.sqrt(self.A * self.A + self.B * self.B + self.C * self.C)

    def as_array(self) -> np.ndarray:
        return np.array([self.A, self.B, self.C])

    @classmethod
    def from_array(cls, a) -> FrameVector:
        return cls(float(a[0]), float(a[1]), float(a[2]))


E1 = FrameVector(1.0, 0.0, 0.0)
E2 = FrameVector(0.0, 1.0, 0.0)
E3 = FrameVector(0.0, 0.0, 1.0)
FRAME = (E1, E2, E3)


def metric(v: FrameVector, w: FrameVector) -> float:
    return v.A * w.A + v.B * w.B + v.C * w.C


def frame_to_algebra(v: FrameVector, ctx: BergerContext) -> AlgebraVector:
    return AlgebraVector(ctx.s1 * v.A, ctx.s1 * v.B, ctx.s3 * v.C)


def algebra_to_frame(x: AlgebraVector, ctx: BergerContext) -> FrameVector:
    return FrameVector(x.x1 / ctx.s1, x.x2 / ctx.s1, x.x3 / ctx.s3)


def structure_bracket(v: FrameVector, w: FrameVector, ctx: BergerContext) -> FrameVector:
    """Bracket from the table [e1,e2] = 2e3, [e2,e3] = h e1, [e3,e1] = h e2, h = (c+3)/2."""
    h = (ctx.c + 3.0) / 2.0
    return FrameVector(
        h * (v.B * w.C - v.C * w.B),
        h * (v.C * w.A - v.A * w.C),
        2.0 * (v.A * w.B - v.B * w.A),
    )


def _connection_table(c: float) -> np.ndarray:
    # table[i, j] = components of nabla_{e_i} e_j
    r = (c + 1.0) / 2.0
    return np.array(
        [
            [[0, 0, 0], [0, 0, 1], [0, -1, 0]],
            [[0, 0, -1], [0, 0, 0], [1, 0, 0]],
            [[0, r, 0], [-r, 0, 0], [0, 0, 0]],
        ],
        dtype=float,
    )


def levi_civita(v: FrameVector, w: FrameVector, ctx: BergerContext) -> FrameVector:
    """``nabla_v w`` for left-invariant v, w (bilinear extension of the table)."""
    out = np.einsum("i,j,ijk->k", v.as_array(), w.as_array(), _connection_table(ctx.c))
    return FrameVector.from_array(out)


def u_tensor(v: FrameVector, w: FrameVector, ctx: BergerContext) -> FrameVector:
    """Bi-invariance obstruction from its component table.

    U(e1,e3) = (c-1)/4 e2 and U(e2,e3) = -(c-1)/4 e1; all other components vanish.
    """
    d = (ctx.c - 1.0) / 4.0
    # symmetric: U(v,w) = d * [(v.A w.C + v.C w.A) e2 - (v.B w.C + v.C w.B) e1]
    return FrameVector(
        -d * (v.B * w.C + v.C * w.B),
        d * (v.A * w.C + v.C * w.A),
        0.0,
    )


def u_tensor_from_bracket(v: FrameVector, w: FrameVector, ctx: BergerContext) -> FrameVector:
    """U from its definition ``2<U(X,Y),Z> = -<X,[Y,Z]> + <Y,[Z,X]>``."""
    comps = [
        0.5 * (-metric(v, structure_bracket(w, z, ctx)) + metric(w, structure_bracket(z, v, ctx)))
        for z in FRAME
    ]
    return FrameVector(*comps)


def curvature(v: FrameVector, w: FrameVector, z: FrameVector, ctx: BergerContext) -> FrameVector:
    """``R(v,w)z = nabla_v nabla_w z - nabla_w nabla_v z - nabla_[v,w] z``."""
    return (
        levi_civita(v, levi_civita(w, z, ctx), ctx)
        - levi_civita(w, levi_civita(v, z, ctx), ctx)
        - levi_civita(structure_bracket(v, w, ctx), z, ctx)
    )


def sectional(v: FrameVector, w: FrameVector, ctx: BergerContext) -> float:
    """Sectional curvature ``<R(v,w)w, v> / (|v|^2 |w|^2 - <v,w>^2)``."""
    area2 = metric(v, v) * metric(w, w) - metric(v, w) ** 2
    scale = metric(v, v) * metric(w, w)
    if area2 <= 1e-14 * scale or scale == 0.0:
        raise ValueError("sectional curvature needs linearly independent vectors")
    return metric(curvature(v, w, w, ctx), v) / area2


def ricci_tensor(ctx: BergerContext) -> np.ndarray:
    """``Ric(x, y) = sum_k <R(e_k, x) y, e_k>`` on frame pairs."""
    ric = np.zeros((3, 3))
    for a, x in enumerate(FRAME):
        for b, y in enumerate(FRAME):
            ric[a, b] = sum(metric(curvature(ek, x, y, ctx), ek) for ek in FRAME)
    return ric


def ricci(ctx: BergerContext) -> tuple[float, float, float]:
    """Diagonal of the Ricci tensor in the frame (it is diagonal)."""
    return tuple(float(x) for x in np.diag(ricci_tensor(ctx)))


def scalar(ctx: BergerContext) -> float:
    return float(np.trace(ricci_tensor(ctx)))


# contact structure


def eta(v: FrameVector) -> float:
    return v.C


def reeb() -> FrameVector:
    return E3


def lorentz_phi(v: FrameVector) -> FrameVector:
    """Lorentz force: phi e1 = -e2, phi e2 = e1, phi e3 = 0."""
    return FrameVector(v.B, -v.A, 0.0)


@dataclass(frozen=True)
class CheckReport:
    """Maximum absolute deviation of an identity evaluated on a finite set of inputs."""

    name: str
    max_deviation: float
    evaluations: int

    def passed(self, tol: float) -> bool:
        return self.max_deviation <= tol


def check_nabla_phi_xi(ctx: BergerContext) -> CheckReport:
    """Check ``(nabla_X phi) Y = -g(X,Y) xi + eta(Y) X`` and ``nabla_X xi = phi X`` on frame pairs."""
    dev = 0.0
    n = 0
    xi = reeb()
    for x in FRAME:
        for y in FRAME:
            lhs = levi_civita(x, lorentz_phi(y), ctx) - lorentz_phi(levi_civita(x, y, ctx))
            rhs = -metric(x, y) * xi + eta(y) * x
            dev = max(dev, (lhs - rhs).norm())
            n += 1
        dev = max(dev, (levi_civita(x, xi, ctx) - lorentz_phi(x)).norm())
        n += 1
    return CheckReport("nabla_phi_xi", dev, n)


# homogeneous structure (G x K) / Delta K


@dataclass(frozen=True)
class ProductAlgebraVector:
    """Element ``(g, k e3)`` of g + k, with ``g`` in frame components.

    The basis (e1,0), (e2,0), (e3,0), (0,e3) is orthonormal for
    :func:`product_inner`.
    """

    g: FrameVector
    k: float

    def __add__(self, other: ProductAlgebraVector) -> ProductAlgebraVector:
        return ProductAlgebraVector(self.g + other.g, self.k + other.k)

    def __sub__(self, other: ProductAlgebraVector) -> ProductAlgebraVector:
        return ProductAlgebraVector(self.g - other.g, self.k - other.k)

    def __mul__(self, s: float) -> ProductAlgebraVector:
        return ProductAlgebraVector(s * self.g, s * self.k)

    __rmul__ = __mul__


def product_inner(a: ProductAlgebraVector, b: ProductAlgebraVector) -> float:
    return metric(a.g, b.g) + a.k * b.k


def product_bracket(a: ProductAlgebraVector, b: ProductAlgebraVector, ctx: BergerContext) -> ProductAlgebraVector:
    """``[(X,Y),(X',Y')] = ([X,X'], 0)``; k is abelian."""
    return ProductAlgebraVector(structure_bracket(a.g, b.g, ctx), 0.0)


def hat_map(x: AlgebraVector | FrameVector, ctx: BergerContext) -> ProductAlgebraVector:
    """Tangent vector at the origin to its representative in p(c).

    ``X^ = (X_m + 4/(c+3) X_k, -(c-1)/(c+3) X_k)``.
    """
    v = algebra_to_frame(x, ctx) if isinstance(x, AlgebraVector) else x
    c = ctx.c
    return ProductAlgebraVector(
        FrameVector(v.A, v.B, 4.0 / (c + 3.0) * v.C),
        -(c - 1.0) / (c + 3.0) * v.C,
    )


def tangent_at_origin(p: ProductAlgebraVector) -> FrameVector:
    """Velocity at the origin of ``t -> exp(t p) . o`` for the action ``(a, b) x = a x b^-1``."""
    return p.g - FrameVector(0.0, 0.0, p.k)


def project_to_p(z: ProductAlgebraVector, ctx: BergerContext) -> ProductAlgebraVector:
    """p(c)-component of z along the splitting g + k = Delta k + p(c)."""
    return hat_map(tangent_at_origin(z), ctx)


def nat_red_check(ctx: BergerContext) -> CheckReport:
    """Evaluate ``U_p`` on all basis pairs of p(c); it should vanish identically.

    p(c) carries the metric transported from the tangent space, i.e. the
    images of the orthonormal frame are orthonormal.
    """
    basis = [hat_map(e, ctx) for e in FRAME]

    def inner_p(a: ProductAlgebraVector, b: ProductAlgebraVector) -> float:
        return metric(tangent_at_origin(a), tangent_at_origin(b))

    def br_p(a, b):
        return project_to_p(product_bracket(a, b, ctx), ctx)

    dev = 0.0
    n = 0
    for x, y, z in itertools.product(basis, repeat=3):
        val = 0.5 * (inner_p(x, br_p(z, y)) + inner_p(y, br_p(z, x)))
        dev = max(dev, abs(val))
        n += 1
    return CheckReport("U_p", dev, n)


def standard_field_check(ctx: BergerContext) -> CheckReport:
    """Compare ``F^zeta(X^, Y^) = -<zeta, [X^, Y^]>`` with ``d eta(X, Y) = g(phi X, Y)``.

    Only meaningful for the normal homogeneous case c = 1, where
    ``zeta = (xi_1/2, xi_1/2)``.
    """
    if ctx.c != 1.0:
        raise ValueError("the standard invariant field coincidence is stated for c = 1 only")
    zeta = ProductAlgebraVector(0.5 * E3, 0.5)
    dev = 0.0
    n = 0
    for x in FRAME:
        for y in FRAME:
            f_zeta = -product_inner(zeta, product_bracket(hat_map(x, ctx), hat_map(y, ctx), ctx))
            d_eta = metric(lorentz_phi(x), y)
            dev = max(dev, abs(f_zeta - d_eta))
            n += 1
    return CheckReport("F_zeta_vs_d_eta", dev, n)


def standard_field(x: FrameVector, y: FrameVector, ctx: BergerContext) -> float:
    """``F^zeta(X^, Y^)`` for the c = 1 choice of zeta."""
    zeta = ProductAlgebraVector(0.5 * E3, 0.5)
    return -product_inner(zeta, product_bracket(hat_map(x, ctx), hat_map(y, ctx), ctx))
