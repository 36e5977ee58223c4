"""Vertex patterns: admissibility, the two partial orders and critical side lengths.

A vertex pattern is the nondecreasing tuple of degrees of the faces around
a vertex.  It is *admissible* when its combinatorial curvature is positive
and no face has more than 41 sides; there are exactly 342 of them.

The critical side length ``a_c(p)`` is the largest ``a <= 2*pi/f_N`` at
which the angle defect ``K_a(p)`` is still non-negative.  Patterns whose
defect stays positive all the way to the hemisphere bound form the set M;
for them ``a_c`` is the bound itself and no root is solved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import DomainError, NotAdmissible, SpherAreaError
from .reporting import pattern_str, to_csv, to_json
from .spherical_core import (
    ROOT_TOL,
    angle_defect,
    combinatorial_curvature,
    max_side,
    monotone_bisect,
)

Pattern = tuple[int, ...]

MAX_FACE_DEGREE = 41
BISECT_FLOOR = 1e-9
# residual K at the hemisphere bound still read as an exact zero
BOUNDARY_ZERO_GUARD = 1e-9
TRIPLE_ZERO_TOL = 1e-12

# (3, f2, k) lies in M exactly when k reaches the threshold for f2; the rule
# also holds for k > 41, which prisms and antiprisms of large order need.
_M_THRESHOLDS = {3: 5, 4: 7, 5: 11}

# Families (prefix, kmin, kmax): pattern = prefix + (k,)
ADMISSIBLE_FAMILIES: tuple[tuple[Pattern, int, int], ...] = (
    ((3, 3), 3, 41),
    ((3, 4), 4, 41),
    ((3, 5), 5, 41),
    ((3, 6), 6, 41),
    ((3, 7), 7, 41),
    ((3, 8), 8, 23),
    ((3, 9), 9, 17),
    ((3, 10), 10, 14),
    ((3, 11), 11, 13),
    ((4, 4), 4, 41),
    ((4, 5), 5, 19),
    ((4, 6), 6, 11),
    ((4, 7), 7, 9),
    ((5, 5), 5, 9),
    ((5, 6), 6, 7),
    ((3, 3, 3), 3, 41),
    ((3, 3, 4), 4, 11),
    ((3, 3, 5), 5, 7),
    ((3, 4, 4), 4, 5),
    ((3, 3, 3, 3), 3, 5),
)

M_FAMILIES: tuple[tuple[Pattern, int, int], ...] = (
    ((3, 3), 5, 41),
    ((3, 4), 7, 41),
    ((3, 5), 11, 41),
)


def expand_families(families: Iterable[tuple[Pattern, int, int]]) -> set[Pattern]:
    return {prefix + (k,) for prefix, lo, hi in families for k in range(lo, hi + 1)}


def as_pattern(degrees: Iterable[int]) -> Pattern:
    """Canonical (sorted) pattern; rejects vertices of degree < 3 or faces < 3."""
    pattern = tuple(sorted(int(f) for f in degrees))
    if len(pattern) < 3:
        raise DomainError(f"a vertex needs at least 3 incident faces, got {pattern!r}")
    if pattern[0] < 3:
        raise DomainError(f"face degrees must be >= 3, got {pattern!r}")
    return pattern


def parse_pattern(text: str) -> Pattern:
    """Parse ``"3,7,29"`` (spaces allowed) into a canonical pattern."""
    try:
        degrees = [int(tok) for tok in text.replace(" ", "").split(",") if tok]
    except ValueError as exc:
        raise DomainError(f"cannot parse pattern {text!r}") from exc
    return as_pattern(degrees)


def phi(pattern: Sequence[int]) -> Fraction:
    return combinatorial_curvature(pattern)


def admissibility_violation(pattern: Sequence[int], max_degree: int | None = MAX_FACE_DEGREE) -> str | None:
    """Name the first admissibility condition ``pattern`` breaks, or None."""
    p = as_pattern(pattern)
    if phi(p) <= 0:
        return f"curvature not positive (phi = {phi(p)}) for pattern {pattern_str(p)}"
    if max_degree is not None and p[-1] > max_degree:
        return f"face degree {p[-1]} > {max_degree} in pattern {pattern_str(p)}"
    return None


def check_admissible(pattern: Sequence[int], max_degree: int | None = MAX_FACE_DEGREE) -> Pattern:
    p = as_pattern(pattern)
    problem = admissibility_violation(p, max_degree)
    if problem:
        raise NotAdmissible(problem)
    return p


def is_admissible(pattern: Sequence[int]) -> bool:
    try:
        return admissibility_violation(pattern) is None
    except DomainError:
        return False


def _boundary_closed_form(p: Pattern) -> bool:
    if len(p) != 3 or p[0] != 3:
        return False
    threshold = _M_THRESHOLDS.get(p[1])
    return threshold is not None and p[2] >= threshold


def membership_M(pattern: Sequence[int], max_degree: int | None = MAX_FACE_DEGREE) -> bool:
    """True iff the defect is still positive at the hemisphere bound ``2*pi/f_N``.

    Decided from the closed-form list, never from floating point.
    """
    return _boundary_closed_form(check_admissible(pattern, max_degree))


def boundary_defect(pattern: Sequence[int]) -> float:
    p = as_pattern(pattern)
    return angle_defect(p, max_side(p[-1]))


def triple_boundary_sign(f1: int, f2: int, f3: int) -> int:
    """Sign of ``K_{2pi/f3}(f1, f2, f3)`` via the cosine-square criterion.

    Returns +1, -1 or 0; zero is declared within 1e-12, which catches the
    exact ties (3,3,4), (3,4,6) and (3,5,10).
    """
    if not 3 <= f1 <= f2 <= f3:
        raise DomainError(f"need 3 <= f1 <= f2 <= f3, got {(f1, f2, f3)!r}")
    diff = math.cos(math.pi / f3) ** 2 - math.cos(math.pi / f1) ** 2 - math.cos(math.pi / f2) ** 2
    if abs(diff) < TRIPLE_ZERO_TOL:
        return 0
    return 1 if diff > 0 else -1


def emb_leq(p: Sequence[int], q: Sequence[int]) -> bool:
    """Embedding order: ``p`` is dominated entrywise by a subsequence of ``q``.

    Both tuples must be sorted; greedy matching is then exact.
    """
    i = 0
    for g in q:
        if i == len(p):
            break
        if p[i] <= g:
            i += 1
    return i == len(p)


def emb_lt(p: Sequence[int], q: Sequence[int]) -> bool:
    return tuple(p) != tuple(q) and emb_leq(p, q)


def sqsubseteq(p: Sequence[int], q: Sequence[int]) -> bool:
    return emb_leq(p[:-1], q[:-1]) and p[-1] >= q[-1]


@dataclass(frozen=True)
class CriticalSolve:
    pattern: Pattern
    a_c: float
    at_boundary: bool
    residual: float
    bracket_width: float

    def to_dict(self) -> dict:
        return {
            "pattern": list(self.pattern),
            "phi": str(phi(self.pattern)),
            "a_c": self.a_c,
            "at_boundary": self.at_boundary,
            "residual": self.residual,
            "bracket_width": self.bracket_width,
        }


def critical_side_length(
    pattern: Sequence[int],
    tol: float = ROOT_TOL,
    max_degree: int | None = MAX_FACE_DEGREE,
) -> CriticalSolve:
    """Critical side length of a single vertex pattern.

    ``max_degree=None`` lifts the 41-gon cap (prisms and antiprisms of any
    order); curvature must still be positive.
    """
    p = check_admissible(pattern, max_degree)
    hi = max_side(p[-1])
    if _boundary_closed_form(p):
        return CriticalSolve(p, hi, True, 0.0, 0.0)

    k_hi = angle_defect(p, hi)
    if k_hi >= 0.0:
        # exact zero at the bound: (3,3,4), (3,4,6), (3,5,10)
        if k_hi > BOUNDARY_ZERO_GUARD:
            raise SpherAreaError(
                f"pattern {pattern_str(p)} is outside M but K at 2*pi/{p[-1]} is {k_hi!r}"
            )
        return CriticalSolve(p, hi, False, k_hi, 0.0)

    defect = lambda a: angle_defect(p, a)  # noqa: E731
    result = monotone_bisect(defect, BISECT_FLOOR, hi, tol)
    root, residual = _snap_to_bound(defect, result.lo, result.hi, result.root, result.residual)
    return CriticalSolve(p, root, False, residual, result.bracket_width)


def _snap_to_bound(defect, lo: float, hi: float, root: float, residual: float) -> tuple[float, float]:
    """Prefer a polygon bound ``2*pi/m`` inside the final bracket if it fits better.

    Roots such as pi/3 for (3,3,4,4) coincide with the hemisphere bound of
    another face degree.  There the other pattern's defect has a square-root
    singularity, so a root that is off by 1e-14 shows up as a cross-defect
    of order 1e-7.  The bracket certificate is unchanged.
    """
    for m in range(3, MAX_FACE_DEGREE + 1):
        candidate = max_side(m)
        if lo <= candidate <= hi:
            r = abs(defect(candidate))
            if r <= residual:
                root, residual = candidate, r
    return root, residual


def a_c(pattern: Sequence[int], tol: float = ROOT_TOL) -> float:
    return critical_side_length(pattern, tol).a_c


def _generate(prefix: list[int], start: int, out: list[Pattern]) -> None:
    for f in range(start, MAX_FACE_DEGREE + 1):
        candidate = prefix + [f]
        if len(candidate) >= 3:
            # larger f or more faces only lower the curvature
            if phi(candidate) <= 0:
                break
            out.append(tuple(candidate))
        _generate(candidate, f, out)


class AdmissibleCatalog:
    """The 342 admissible patterns with their critical solves.

    Ordered lexicographically by (N, degrees).  Read-only after construction.
    """

    def __init__(self, patterns: Sequence[Pattern], solves: Mapping[Pattern, CriticalSolve]):
        self.patterns: tuple[Pattern, ...] = tuple(patterns)
        self.solves: Mapping[Pattern, CriticalSolve] = dict(solves)
        self._index = {p: i for i, p in enumerate(self.patterns)}

    def __len__(self) -> int:
        return len(self.patterns)

    def __iter__(self) -> Iterator[Pattern]:
        return iter(self.patterns)

    def __contains__(self, pattern: object) -> bool:
        return pattern in self._index

    def index(self, pattern: Pattern) -> int:
        return self._index[pattern]

    def a_c(self, pattern: Pattern) -> float:
        return self.solves[pattern].a_c

    @property
    def boundary(self) -> tuple[Pattern, ...]:
        return tuple(p for p in self.patterns if self.solves[p].at_boundary)

    def argmax_a_c(self) -> tuple[float, list[Pattern]]:
        best = max(s.a_c for s in self.solves.values())
        return best, [p for p in self.patterns if self.solves[p].a_c == best]

    def rows(self) -> list[dict]:
        return [self.solves[p].to_dict() for p in self.patterns]

    def to_json(self) -> str:
        return to_json({"count": len(self), "patterns": self.rows()})

    def to_csv(self) -> str:
        header = ["pattern", "phi", "a_c", "at_boundary", "residual"]
        rows = (
            [pattern_str(p), str(phi(p)), s.a_c, s.at_boundary, s.residual]
            for p, s in ((p, self.solves[p]) for p in self.patterns)
        )
        return to_csv(header, rows)


@lru_cache(maxsize=8)
def enumerate_admissible(tol: float = ROOT_TOL) -> AdmissibleCatalog:
    found: list[Pattern] = []
    _generate([], 3, found)
    found.sort(key=lambda p: (len(p), p))
    solves = {p: critical_side_length(p, tol) for p in found}
    return AdmissibleCatalog(found, solves)


# Unordered pattern pairs with a common critical side length and zero
# cross-defect: the (3,4,5)/(4,4,4) identity plus every pair of patterns
# occurring together in a multi-pattern Johnson solid that tiles the sphere.
Z_PAIRS: tuple[frozenset[Pattern], ...] = tuple(
    frozenset(pair)
    for pair in (
        ((3, 4, 5), (4, 4, 4)),
        ((3, 3, 3, 3), (3, 3, 4)),
        ((3, 3, 4, 4), (3, 4, 6)),
        ((3, 3, 5, 5), (3, 5, 10)),
        ((3, 3, 3, 3, 3), (3, 3, 3, 5)),
        ((3, 4, 4, 4), (4, 4, 8)),
        ((3, 3, 3, 3, 3), (3, 5, 5)),
        ((3, 3, 3, 5), (3, 5, 5)),
        ((3, 4, 4, 5), (4, 5, 10)),
    )
)


def in_z(p: Sequence[int], q: Sequence[int]) -> bool:
    return frozenset((tuple(p), tuple(q))) in Z_PAIRS


@lru_cache(maxsize=4096)
def solve_pattern(pattern: Pattern, tol: float = ROOT_TOL) -> CriticalSolve:
    """Cached solve without the 41-gon cap, for solids such as large prisms."""
    return critical_side_length(pattern, tol, max_degree=None)
