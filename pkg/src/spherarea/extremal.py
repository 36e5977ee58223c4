"""Exhaustive extremal searches over the admissible vertex patterns.

``area_min_search`` ranks every admissible pattern by the area of its
faces at its own critical side length.  ``gap_search`` builds the set of
positive cross-defects ``K_{a_c(p)}(q)`` with margin ``epsilon`` and reports
its two smallest members.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from .catalog import get_solid
from .errors import MarginTooLarge, NotAdmissible, RobustnessError
from .patterns import (
    MAX_FACE_DEGREE,
    Z_PAIRS,
    Pattern,
    as_pattern,
    enumerate_admissible,
    in_z,
)
from .reporting import pattern_str, to_csv, to_json
from .spherical_core import (
    ROOT_TOL,
    TWO_PI,
    angle_defect,
    angle_derivative,
    defect_derivative,
    max_side,
    polygon_area,
)
from .tessellation import FOUR_PI, SolidRecord, area_at, graph_a_c, total_defect

__all__ = [
    "Z_PAIRS",
    "AreaEntry",
    "AreaMinReport",
    "GapEntry",
    "GapReport",
    "Witness",
    "ProbeReport",
    "area_min_search",
    "gap_search",
    "gap_upper_witness",
    "area_min_upper_witness",
    "neighborhood_probe",
]

MAX_MARGIN = 1e-3
SEPARATION_FACTOR = 10.0
TOP_ENTRIES = 20
# roundoff allowance per summed corner angle, on top of the a_c bracket
_ANGLE_ROUNDOFF = 4e-16


def _propagate(slope: float, width: float) -> float:
    # closed-form boundary roots have width 0 but may sit where the slope is infinite
    return 0.0 if width == 0.0 else abs(slope) * width


# --------------------------------------------------------------------------
# minimal critical area


@dataclass(frozen=True)
class AreaEntry:
    pattern: Pattern
    a_c: float
    area: float
    uncertainty: float

    def to_dict(self) -> dict:
        return {
            "pattern": list(self.pattern),
            "a_c": self.a_c,
            "area": self.area,
            "uncertainty": self.uncertainty,
        }


@dataclass(frozen=True)
class AreaMinReport:
    ranked: tuple[AreaEntry, ...]

    @property
    def first(self) -> AreaEntry:
        return self.ranked[0]

    @property
    def second(self) -> AreaEntry:
        return self.ranked[1]

    @property
    def separation(self) -> float:
        return self.second.area - self.first.area

    @property
    def separation_bound(self) -> float:
        return SEPARATION_FACTOR * (self.first.uncertainty + self.second.uncertainty)

    @property
    def separated(self) -> bool:
        return self.separation > self.separation_bound

    def to_dict(self, top: int | None = None) -> dict:
        ranked = self.ranked if top is None else self.ranked[:top]
        return {
            "search": "area-min",
            "patterns": len(self.ranked),
            "first": self.first.to_dict(),
            "second": self.second.to_dict(),
            "separation": self.separation,
            "separation_bound": self.separation_bound,
            "separated": self.separated,
            "ranked": [e.to_dict() for e in ranked],
        }

    def to_json(self, top: int | None = None) -> str:
        return to_json(self.to_dict(top))

    def to_csv(self) -> str:
        rows = ([e.pattern, e.a_c, e.area, e.uncertainty] for e in self.ranked)
        return to_csv(["pattern", "a_c", "area", "uncertainty"], rows)


def local_area(pattern: Sequence[int], a: float) -> float:
    return math.fsum(polygon_area(f, a) for f in pattern)


def area_min_search(tol: float = ROOT_TOL) -> AreaMinReport:
    catalog = enumerate_admissible(tol)
    entries = []
    for p in catalog:
        solve = catalog.solves[p]
        a = solve.a_c
        # d(area)/da of an n-gon is n * d(beta)/da
        slope = sum(f * angle_derivative(f, a) for f in p) if solve.bracket_width else 0.0
        err = _propagate(slope, solve.bracket_width) + _ANGLE_ROUNDOFF * sum(p)
        entries.append(AreaEntry(p, a, local_area(p, a), err))
    entries.sort(key=lambda e: (e.area, e.pattern))
    return AreaMinReport(tuple(entries))


# --------------------------------------------------------------------------
# gap search


@dataclass(frozen=True)
class GapEntry:
    p: Pattern
    q: Pattern
    k: float
    uncertainty: float = 0.0

    @property
    def diagonal(self) -> bool:
        return self.p == self.q

    def sort_key(self) -> tuple:
        return (self.k, self.p, self.q)

    def to_dict(self) -> dict:
        return {"p": list(self.p), "q": list(self.q), "k": self.k, "uncertainty": self.uncertainty}


@dataclass(frozen=True)
class GapReport:
    epsilon: float
    entries: tuple[GapEntry, ...]
    candidates: int
    skipped_domain: tuple[tuple[Pattern, Pattern], ...] = field(default=())

    @property
    def size(self) -> int:
        return len(self.entries)

    @property
    def first(self) -> GapEntry:
        return self.entries[0]

    @property
    def second(self) -> GapEntry:
        return self.entries[1]

    @property
    def diagonal_count(self) -> int:
        return sum(e.diagonal for e in self.entries)

    @property
    def separation(self) -> float:
        return self.second.k - self.first.k

    @property
    def separation_bound(self) -> float:
        return SEPARATION_FACTOR * (self.first.uncertainty + self.second.uncertainty)

    @property
    def separated(self) -> bool:
        return self.separation > self.separation_bound

    def to_dict(self, top: int = TOP_ENTRIES) -> dict:
        return {
            "search": "gap",
            "epsilon": self.epsilon,
            "size": self.size,
            "candidates": self.candidates,
            "diagonal_entries": self.diagonal_count,
            "skipped_domain": [[list(p), list(q)] for p, q in self.skipped_domain],
            "first": self.first.to_dict(),
            "second": self.second.to_dict(),
            "separation": self.separation,
            "separation_bound": self.separation_bound,
            "separated": self.separated,
            "top": [e.to_dict() for e in self.entries[:top]],
        }

    def to_json(self, top: int = TOP_ENTRIES) -> str:
        return to_json(self.to_dict(top))

    def to_csv(self, top: int | None = TOP_ENTRIES) -> str:
        entries = self.entries if top is None else self.entries[:top]
        rows = ([i + 1, e.p, e.q, e.k, e.uncertainty] for i, e in enumerate(entries))
        return to_csv(["rank", "p", "q", "k", "uncertainty"], rows)


def _gap_rows(
    ps: Sequence[Pattern],
    qs: Sequence[Pattern],
    table: dict[Pattern, tuple[float, float]],
    epsilon: float,
) -> tuple[list[GapEntry], int, list[tuple[Pattern, Pattern]]]:
    """Off-diagonal entries for the given rows ``ps``; pure, so safe to farm out."""
    out: list[GapEntry] = []
    skipped: list[tuple[Pattern, Pattern]] = []
    candidates = 0
    for p in ps:
        a, width = table[p]
        for q in qs:
            if q == p or in_z(p, q):
                continue
            candidates += 1
            if not table[q][0] >= epsilon + a:
                continue
            if a > max_side(q[-1]):
                # only reachable for epsilon < 0: K_a(q) is undefined past the bound
                skipped.append((p, q))
                continue
            k = angle_defect(q, a)
            if k > epsilon:
                err = _propagate(defect_derivative(q, a), width) + _ANGLE_ROUNDOFF * len(q)
                out.append(GapEntry(p, q, k, err))
    return out, candidates, skipped


def _chunks(items: Sequence, n: int) -> list[Sequence]:
    size = max(1, math.ceil(len(items) / n))
    return [items[i : i + size] for i in range(0, len(items), size)]


def gap_search(epsilon: float = 0.0, tol: float = ROOT_TOL, jobs: int = 1) -> GapReport:
    """Entries of the margin-``epsilon`` gap set, sorted by ``(k, p, q)``.

    Diagonal entries ``(p, p, 2*pi/41)`` cover the boundary patterns with a
    41-gon; off-diagonal rows run over the admissible patterns outside the
    boundary set, except the tetrahedral vertex.
    """
    if not math.isfinite(epsilon) or abs(epsilon) > MAX_MARGIN:
        raise MarginTooLarge(f"|epsilon| must be at most {MAX_MARGIN:g}, got {epsilon!r}")
    catalog = enumerate_admissible(tol)
    table = {p: (s.a_c, s.bracket_width) for p, s in catalog.solves.items()}
    boundary = set(catalog.boundary)

    entries = [
        GapEntry(p, p, TWO_PI / MAX_FACE_DEGREE)
        for p in catalog
        if p in boundary and p[-1] == MAX_FACE_DEGREE
    ]
    rows = [p for p in catalog if p not in boundary and p != (3, 3, 3)]
    qs = list(catalog)
    candidates = len(entries)
    skipped: list[tuple[Pattern, Pattern]] = []

    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [
                pool.submit(_gap_rows, chunk, qs, table, epsilon) for chunk in _chunks(rows, jobs)
            ]
            parts = [f.result() for f in futures]
    else:
        parts = [_gap_rows(rows, qs, table, epsilon)]
    for found, count, skip in parts:
        entries += found
        candidates += count
        skipped += skip

    entries.sort(key=GapEntry.sort_key)
    return GapReport(epsilon, tuple(entries), candidates, tuple(sorted(skipped)))


def require_separated(report: AreaMinReport | GapReport) -> None:
    if not report.separated:
        raise RobustnessError(
            f"first and second minima differ by {report.separation!r}, "
            f"not above {report.separation_bound!r}"
        )


def require_agreement(a: GapReport, b: GapReport, tol: float = 1e-9) -> None:
    """Raise unless two margin runs share first and second minima."""
    for label, x, y in (("first", a.first, b.first), ("second", a.second, b.second)):
        if (x.p, x.q) != (y.p, y.q) or abs(x.k - y.k) > tol:
            raise RobustnessError(
                f"{label} minimum differs between epsilon={a.epsilon!r} "
                f"({pattern_str(x.p)}/{pattern_str(x.q)}: {x.k!r}) and epsilon={b.epsilon!r} "
                f"({pattern_str(y.p)}/{pattern_str(y.q)}: {y.k!r})"
            )


# --------------------------------------------------------------------------
# witnesses


@dataclass(frozen=True)
class Witness:
    solid: str
    area: float
    a_c: float
    argmin: tuple[Pattern, ...]
    gauss_bonnet_area: float

    @property
    def deficit(self) -> float:
        return FOUR_PI - self.area

    def to_dict(self) -> dict:
        return {
            "solid": self.solid,
            "a_c": self.a_c,
            "argmin": [list(p) for p in self.argmin],
            "area": self.area,
            "gauss_bonnet_area": self.gauss_bonnet_area,
            "deficit": self.deficit,
        }


def critical_witness(solid: SolidRecord, tol: float = ROOT_TOL) -> Witness:
    a, argmin = graph_a_c(solid, tol)
    area = area_at(solid, a)
    return Witness(solid.name, area, a, tuple(argmin), FOUR_PI - total_defect(solid, a))


def gap_upper_witness(tol: float = ROOT_TOL) -> Witness:
    """Critical area of J16, a non-tiling solid close to the full sphere."""
    w = critical_witness(get_solid("J16", extra=()), tol)
    if not w.deficit > 0.0:
        raise RobustnessError(f"J16 critical area {w.area!r} is not below 4*pi")
    return w


def area_min_upper_witness(tol: float = ROOT_TOL) -> Witness:
    """Critical area of Gamma, a solid with a very small critical area."""
    return critical_witness(get_solid("Gamma", extra=()), tol)


@dataclass(frozen=True)
class ProbeReport:
    p: Pattern
    q: Pattern
    a_c_p: float
    a_c_q: float
    between: tuple[tuple[Pattern, float], ...]

    def to_dict(self) -> dict:
        return {
            "p": list(self.p),
            "q": list(self.q),
            "a_c_p": self.a_c_p,
            "a_c_q": self.a_c_q,
            "between": [{"pattern": list(r), "a_c": a} for r, a in self.between],
        }


def neighborhood_probe(p: Sequence[int], q: Sequence[int], tol: float = ROOT_TOL) -> ProbeReport:
    """Admissible patterns whose critical side length lies strictly between those of p and q."""
    catalog = enumerate_admissible(tol)
    p, q = as_pattern(p), as_pattern(q)
    for x in (p, q):
        if x not in catalog:
            raise NotAdmissible(f"{pattern_str(x)} is not an admissible pattern")
    ap, aq = catalog.a_c(p), catalog.a_c(q)
    lo, hi = min(ap, aq), max(ap, aq)
    between = sorted(
        ((r, catalog.a_c(r)) for r in catalog if lo < catalog.a_c(r) < hi),
        key=lambda e: (e[1], e[0]),
    )
    return ProbeReport(p, q, ap, aq, tuple(between))
