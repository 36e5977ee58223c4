"""Spherical trigonometry of regular polygons and vertex angle sums.

All angles are in radians on the unit sphere.  A regular spherical n-gon
of side ``a`` exists (inside a hemisphere) for ``0 < a <= 2*pi/n``; its
corner angle ``beta`` satisfies ``cos(a/2) * sin(beta/2) = cos(pi/n)``.

The half-angle ``beta/2`` is evaluated as ``atan2(c, sqrt(C**2 - c**2))``
with ``c = cos(pi/n)``, ``C = cos(a/2)`` and ``C - c`` rewritten as a
product of sines.  This keeps full relative precision as ``a`` approaches
the hemisphere bound, where a naive ``asin(c / C)`` loses half its digits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

from .errors import DomainError, MaxIterations, NoSignChange

TWO_PI = 2.0 * math.pi

# excess of cos(pi/n)/cos(a/2) over 1 tolerated as roundoff before raising
CLAMP_GUARD = 1e-9

ROOT_TOL = 1e-13
MAX_ITERATIONS = 200


@dataclass(frozen=True)
class PolygonGeometry:
    n: int
    a: float
    beta: float
    area: float


@dataclass(frozen=True)
class BisectionResult:
    """Outcome of :func:`monotone_bisect`.

    ``lo``/``hi`` and ``f_lo``/``f_hi`` are the final bracket and the function
    values there; they carry opposite (weak) signs and certify the root.
    """

    root: float
    bracket_width: float
    residual: float
    iterations: int
    lo: float
    hi: float
    f_lo: float
    f_hi: float


def max_side(n: int) -> float:
    """Largest side length of a regular spherical n-gon inside a hemisphere."""
    return TWO_PI / n


def _check_degree(n: int) -> None:
    if isinstance(n, bool) or not isinstance(n, int) or n < 3:
        raise DomainError(f"face degree must be an integer >= 3, got {n!r}")


def _corner_legs(n: int, a: float) -> tuple[float, float]:
    """Return ``(c, s)`` with ``beta/2 = atan2(c, s)`` for the n-gon of side ``a``.

    ``c = cos(pi/n)`` and ``s = sqrt(cos(a/2)**2 - c**2)``.
    """
    if not (a >= 0.0) or math.isinf(a):
        raise DomainError(f"side length must be a finite non-negative number, got {a!r}")
    big_c = math.cos(0.5 * a)
    c = math.cos(math.pi / n)
    if big_c <= 0.0 or c / big_c > 1.0 + CLAMP_GUARD:
        raise DomainError(
            f"side length {a!r} exceeds the hemisphere bound 2*pi/{n} = {max_side(n)!r}"
        )
    half_gap = 0.5 * (math.pi / n - 0.5 * a)
    if half_gap <= 0.0:
        # within the clamp guard: the corner is a straight angle
        return c, 0.0
    diff = 2.0 * math.sin(0.5 * (math.pi / n + 0.5 * a)) * math.sin(half_gap)
    return c, math.sqrt(diff * (big_c + c))


def _half_corner(n: int, a: float) -> float:
    c, s = _corner_legs(n, a)
    return math.atan2(c, s)


def interior_angle(n: int, a: float) -> float:
    _check_degree(n)
    if not a > 0.0:
        raise DomainError(f"side length must be positive, got {a!r}")
    return 2.0 * _half_corner(n, a)


def polygon_area(n: int, a: float) -> float:
    """Area ``n*beta - (n-2)*pi`` of the regular spherical n-gon of side ``a``.

    Computed as ``2n * (beta/2 - beta0/2)`` where ``beta0`` is the planar
    corner angle, with the angle difference taken by a single ``atan2`` so
    that small polygons do not lose digits to cancellation.
    """
    _check_degree(n)
    if not a > 0.0:
        raise DomainError(f"side length must be positive, got {a!r}")
    c, s = _corner_legs(n, a)
    s0 = math.sin(math.pi / n)
    sin_half_a = math.sin(0.5 * a)
    excess = math.atan2(c * sin_half_a * sin_half_a / (s + s0), s * s0 + c * c)
    return 2.0 * n * excess


def polygon_geometry(n: int, a: float) -> PolygonGeometry:
    return PolygonGeometry(n=n, a=a, beta=interior_angle(n, a), area=polygon_area(n, a))


def angle_derivative(n: int, a: float) -> float:
    """d(beta)/da for the regular n-gon; infinite at the hemisphere bound."""
    _check_degree(n)
    c, s = _corner_legs(n, a)
    if s == 0.0:
        return math.inf
    return c * math.sin(0.5 * a) / (math.cos(0.5 * a) * s)


def total_angle(pattern: Iterable[int], a: float) -> float:
    """Sum of the corner angles meeting at a vertex with the given face degrees.

    ``a == 0`` is allowed and gives the Euclidean total angle.
    """
    degrees = tuple(pattern)
    for f in degrees:
        _check_degree(f)
    return sum(2.0 * _half_corner(f, a) for f in degrees)


def angle_defect(pattern: Iterable[int], a: float) -> float:
    return TWO_PI - total_angle(pattern, a)


def defect_derivative(pattern: Iterable[int], a: float) -> float:
    return -sum(angle_derivative(f, a) for f in pattern)


def combinatorial_curvature(pattern: Iterable[int]) -> Fraction:
    """Exact ``1 - N/2 + sum(1/f_i)`` for a vertex of degree N."""
    degrees = tuple(pattern)
    if len(degrees) < 3:
        raise DomainError(f"a vertex needs at least 3 faces, got {degrees!r}")
    for f in degrees:
        _check_degree(f)
    return 1 - Fraction(len(degrees), 2) + sum((Fraction(1, f) for f in degrees), Fraction(0))


def _sign(x: float) -> int:
    return (x > 0.0) - (x < 0.0)


def _exact_root(x: float, iterations: int) -> BisectionResult:
    return BisectionResult(x, 0.0, 0.0, iterations, x, x, 0.0, 0.0)


def monotone_bisect(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = ROOT_TOL,
    max_iterations: int = MAX_ITERATIONS,
) -> BisectionResult:
    """Bisect a strictly monotone ``f`` on ``[lo, hi]`` down to ``tol``.

    The midpoint rule is fixed, so results are reproducible bit for bit.
    The reported root is the final bracket endpoint with the smaller
    ``|f|``; this matters for functions with a square-root singularity at
    an endpoint, where the midpoint can sit far from the zero in value.
    """
    if not tol > 0.0:
        raise ValueError("tolerance must be positive")
    if not lo <= hi:
        raise ValueError(f"empty bracket [{lo!r}, {hi!r}]")
    f_lo, f_hi = f(lo), f(hi)
    if f_lo == 0.0:
        return _exact_root(lo, 0)
    if f_hi == 0.0:
        return _exact_root(hi, 0)
    if _sign(f_lo) == _sign(f_hi):
        raise NoSignChange(f"f({lo!r}) = {f_lo!r} and f({hi!r}) = {f_hi!r} have the same sign")

    iterations = 0
    while hi - lo > tol:
        mid = lo + 0.5 * (hi - lo)
        if iterations >= max_iterations or not lo < mid < hi:
            raise MaxIterations(
                f"bracket width {hi - lo!r} still above {tol!r} after {iterations} iterations"
            )
        iterations += 1
        f_mid = f(mid)
        if f_mid == 0.0:
            return _exact_root(mid, iterations)
        if _sign(f_mid) == _sign(f_lo):
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid

    if abs(f_hi) < abs(f_lo):
        root, residual = hi, abs(f_hi)
    else:
        root, residual = lo, abs(f_lo)
    return BisectionResult(root, hi - lo, residual, iterations, lo, hi, f_lo, f_hi)
