"""First integrals, periodicity criteria, conjugate times, length bounds and diameters."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .berger import FrameVector

DEFAULT_MAX_DEN = 10**6
DEFAULT_TOL = 1e-12

PERIODIC = "yes"
NOT_FOUND = "no-at-cap"
DEGENERATE = "degenerate"


@dataclass(frozen=True)
class PeriodicityReport:
    """Outcome of a rationality test.

    ``verdict`` is ``"yes"`` (a convergent p/q with q <= max_den lies within
    tol), ``"no-at-cap"`` (none does), or ``"degenerate"`` (the criterion does
    not apply; every trajectory of the family is periodic).
    """

    verdict: str
    value: Optional[float] = None
    rational: Optional[tuple[int, int]] = None
    period: Optional[float] = None

    @property
    def is_periodic(self) -> bool:
        return self.verdict in (PERIODIC, DEGENERATE)


def contact_angle(omega: FrameVector) -> float:
    """Angle between Omega and the Reeb field, ``arccos(C/|Omega|)``.

    Evaluated as ``atan2(hypot(A, B), C)``, which stays accurate near 0 and pi.
    """
    if omega.norm() == 0.0:
        raise ValueError("contact angle undefined for the zero vector")
    return math.atan2(math.hypot(omega.A, omega.B), omega.C)


def lambda_engel(theta: float, c: float) -> float:
    """``lambda = (c+3) - (c-1) cos^2(theta)``."""
    return (c + 3.0) - (c - 1.0) * math.cos(theta) ** 2


def lambda_engel_alt(theta: float, c: float) -> float:
    """Same quantity written as ``(c+3) sin^2(theta) + 4 cos^2(theta)``."""
    return (c + 3.0) * math.sin(theta) ** 2 + 4.0 * math.cos(theta) ** 2


def convergents(x: float, max_den: int):
    """Continued-fraction convergents of the exact binary value of x, denominators <= max_den."""
    f = Fraction(x)
    h0, h1 = 0, 1
    k0, k1 = 1, 0
    while True:
        a = math.floor(f)
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        if k1 > max_den:
            return
        yield h1, k1
        rest = f - a
        if rest == 0:
            return
        f = 1 / rest


def rational_test(x: float, max_den: int = DEFAULT_MAX_DEN, tol: float = DEFAULT_TOL) -> PeriodicityReport:
    """Decide whether x is rational with denominator <= max_den, to within tol."""
    if not math.isfinite(x):
        raise ValueError(f"cannot test non-finite value {x!r}")
    if max_den < 1 or not tol >= 0:
        raise ValueError("max_den must be >= 1 and tol >= 0")
    for h, k in convergents(x, max_den):
        if abs(x - h / k) <= tol:
            return PeriodicityReport(PERIODIC, x, (h, k))
    return PeriodicityReport(NOT_FOUND, x)


def geodesic_period_quantity(theta: float, c: float) -> float:
    """``|sqrt(lambda) / ((c+3)(1-c))|``; undefined at c = 1."""
    if c == 1.0:
        raise ValueError("the periodicity quantity is undefined at c = 1")
    return abs(math.sqrt(lambda_engel(theta, c)) / ((c + 3.0) * (1.0 - c)))


def geodesic_period_test(theta: float, c: float, max_den: int = DEFAULT_MAX_DEN, tol: float = DEFAULT_TOL) -> PeriodicityReport:
    """Periodicity of the geodesic with contact angle theta.

    On the round sphere (c = 1) every geodesic is a great circle of length 2 pi,
    reported as degenerate.
    """
    if not c > -3.0:
        raise ValueError("c must exceed -3")
    if c == 1.0:
        return PeriodicityReport(DEGENERATE, None, None, 2.0 * math.pi)
    return rational_test(geodesic_period_quantity(theta, c), max_den, tol)


def magnetic_period_ratio(q: float, theta: float) -> float:
    """``(q + s)/(q - s)`` with ``s = sqrt(q^2 - 4 q cos(theta) + 4)``, for c = 1."""
    s = math.sqrt(q * q - 4.0 * q * math.cos(theta) + 4.0)
    den = q - s
    if den == 0.0:
        raise ValueError("vanishing denominator q - sqrt(q^2 - 4q cos(theta) + 4)")
    return (q + s) / den


def magnetic_period_test(q: float, theta: float, max_den: int = DEFAULT_MAX_DEN, tol: float = DEFAULT_TOL) -> PeriodicityReport:
    """Periodicity of the contact magnetic trajectory on the round sphere."""
    return rational_test(magnetic_period_ratio(q, theta), max_den, tol)


@dataclass(frozen=True)
class ConjugateTimes:
    """Conjugate times along a geodesic.

    ``roots`` solve ``tan(t/2) = k t`` with ``k = (1-c) sin^2(theta) / 8``;
    ``pi_family`` holds ``pi, 2 pi, ...``.  Both are in the same variable t,
    and ``rescaled`` maps a time to ``t / sqrt(lambda)`` (lambda is constant
    along a geodesic since theta is a first integral).
    """

    slope: float
    lam: float
    roots: tuple[float, ...]
    pi_family: tuple[float, ...]

    def rescaled(self, times) -> tuple[float, ...]:
        s = math.sqrt(self.lam)
        return tuple(t / s for t in times)


def _bisect(g, lo: float, hi: float) -> float:
    # invariant: g(lo) <= 0 < g(hi) (hi may sit on a pole)
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            return lo if abs(g(lo)) <= abs(g(hi)) else hi
        if g(mid) > 0.0:
            hi = mid
        else:
            lo = mid


def conjugate_times(theta: float, c: float, n: int) -> ConjugateTimes:
    """First n positive roots of ``tan(t/2) = ((1-c)/8) sin^2(theta) t`` plus the pi-family.

    With ``u = t/2`` the equation reads ``tan(u) = 2k u``.  Each branch
    ``(m pi - pi/2, m pi + pi/2)``, m >= 1, holds exactly one root, located on
    the side of ``m pi`` given by the sign of k; an extra root in
    ``(0, pi/2)`` exists iff ``2k > 1``.  Roots are bisected to float resolution.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    k = (1.0 - c) / 8.0 * math.sin(theta) ** 2

    def g(u):
        return math.tan(u) - 2.0 * k * u

    half = math.pi / 2.0
    roots = []
    if 2.0 * k > 1.0:
        roots.append(2.0 * _bisect(g, 0.0, half))
    m = 1
    while len(roots) < n:
        centre = m * math.pi
        if k > 0.0:
            u = _bisect(g, centre, centre + half)
        elif k < 0.0:
            u = _bisect(g, centre - half, centre)
        else:
            u = centre
        roots.append(2.0 * u)
        m += 1
    roots = roots[:n]
    return ConjugateTimes(k, lambda_engel(theta, c), tuple(roots), tuple(j * math.pi for j in range(1, n + 1)))


def conjugate_residual(t: float, theta: float, c: float) -> float:
    return abs(math.tan(t / 2.0) - (1.0 - c) / 8.0 * math.sin(theta) ** 2 * t)


def length_bound(theta: float, c: float) -> float:
    """Lower bound ``8 pi / (2 sqrt(lambda) + (c-1) cos(theta))`` on a simply closed geodesic's length."""
    den = 2.0 * math.sqrt(lambda_engel(theta, c)) + (c - 1.0) * math.cos(theta)
    if not den > 0.0:
        raise ValueError(f"length bound needs a positive denominator (got {den!r})")
    return 8.0 * math.pi / den


def diameter(c: float) -> float:
    """Diameter of M^3(c), piecewise in c."""
    if not c > -3.0:
        raise ValueError("c must exceed -3")
    if c <= 1.0:
        return 2.0 * math.pi / math.sqrt(c + 3.0)
    if c < 5.0:
        return 4.0 * math.pi / (c + 3.0)
    return math.pi / math.sqrt(c - 1.0)
