"""Planar tessellations, solid records and their spherical geometry.

A tessellation is given by its face cycles; edges and incidences are
derived.  Most geometry only needs the vertex-pattern census and the face
census of a solid, so :class:`SolidRecord` carries those and an optional
full tessellation.
"""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import DomainError
from .patterns import (
    Pattern,
    as_pattern,
    in_z,
    solve_pattern,
)
from .reporting import pattern_str
from .spherical_core import ROOT_TOL, angle_defect, max_side, polygon_area

FOUR_PI = 4.0 * math.pi
EQ_TOL = 1e-10
ARGMIN_TOL = 1e-12

Edge = tuple[int, int]


def _edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


# --------------------------------------------------------------------------
# censuses


@dataclass(frozen=True)
class VertexCensus:
    entries: tuple[tuple[Pattern, int], ...]

    def __post_init__(self):
        seen = set()
        for pattern, count in self.entries:
            if as_pattern(pattern) != pattern:
                raise DomainError(f"pattern {pattern!r} is not in canonical sorted form")
            if pattern in seen:
                raise DomainError(f"pattern {pattern_str(pattern)} listed twice")
            if not isinstance(count, int) or count < 1:
                raise DomainError(f"count for {pattern_str(pattern)} must be a positive integer")
            seen.add(pattern)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[Iterable[int], int]]) -> "VertexCensus":
        entries = [(as_pattern(p), c) for p, c in pairs]
        return cls(tuple(sorted(entries, key=lambda e: (len(e[0]), e[0]))))

    @property
    def patterns(self) -> tuple[Pattern, ...]:
        return tuple(p for p, _ in self.entries)

    @property
    def total(self) -> int:
        return sum(c for _, c in self.entries)

    def as_dict(self) -> dict[Pattern, int]:
        return dict(self.entries)


@dataclass(frozen=True)
class FaceCensus:
    entries: tuple[tuple[int, int], ...]

    def __post_init__(self):
        degrees = [d for d, _ in self.entries]
        if len(set(degrees)) != len(degrees):
            raise DomainError(f"face degrees listed twice in {degrees!r}")
        for d, c in self.entries:
            if not isinstance(d, int) or d < 3:
                raise DomainError(f"face degree must be an integer >= 3, got {d!r}")
            if not isinstance(c, int) or c < 1:
                raise DomainError(f"count for {d}-gons must be a positive integer")

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]]) -> "FaceCensus":
        return cls(tuple(sorted((int(d), c) for d, c in pairs)))

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(d for d, _ in self.entries)

    @property
    def total(self) -> int:
        return sum(c for _, c in self.entries)

    @property
    def incidences(self) -> int:
        return sum(d * c for d, c in self.entries)

    def as_dict(self) -> dict[int, int]:
        return dict(self.entries)


# --------------------------------------------------------------------------
# combinatorial tessellations


class PlanarTessellation:
    """Faces as vertex cycles over ``range(num_vertices)``.

    Construction never rejects a bad graph; call :func:`validate`.
    """

    def __init__(self, faces: Iterable[Sequence[int]], num_vertices: int | None = None):
        self.faces: tuple[tuple[int, ...], ...] = tuple(tuple(int(v) for v in f) for f in faces)
        if num_vertices is None:
            num_vertices = 1 + max((v for f in self.faces for v in f), default=-1)
        self.num_vertices = num_vertices

        edge_faces: dict[Edge, list[int]] = defaultdict(list)
        vertex_faces: dict[int, list[int]] = defaultdict(list)
        for i, face in enumerate(self.faces):
            for j, v in enumerate(face):
                edge_faces[_edge(v, face[(j + 1) % len(face)])].append(i)
                vertex_faces[v].append(i)
        self.edge_faces = dict(edge_faces)
        self.vertex_faces = {v: tuple(dict.fromkeys(fs)) for v, fs in vertex_faces.items()}

    @property
    def vertices(self) -> range:
        return range(self.num_vertices)

    @property
    def edges(self) -> tuple[Edge, ...]:
        return tuple(sorted(self.edge_faces))

    def neighbors(self, v: int) -> set[int]:
        out = set()
        for i in self.vertex_faces.get(v, ()):
            face = self.faces[i]
            j = face.index(v)
            out.add(face[j - 1])
            out.add(face[(j + 1) % len(face)])
        return out

    def euler_characteristic(self) -> int:
        return self.num_vertices - len(self.edge_faces) + len(self.faces)

    def face_ring(self, v: int) -> list[int]:
        """Faces around ``v`` in cyclic order (walk across shared edges)."""
        incident = self.vertex_faces[v]
        start = incident[0]
        ring = [start]
        face = self.faces[start]
        j = face.index(v)
        came_from = face[j - 1]
        current = start
        while True:
            face = self.faces[current]
            j = face.index(v)
            a, b = face[j - 1], face[(j + 1) % len(face)]
            leave = b if a == came_from else a
            nxt = [i for i in self.edge_faces[_edge(v, leave)] if i != current][0]
            if nxt == start:
                return ring
            ring.append(nxt)
            came_from, current = leave, nxt

    def vertex_pattern(self, v: int) -> Pattern:
        return as_pattern(len(self.faces[i]) for i in self.vertex_faces[v])


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    rule: str | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


def validate(t: PlanarTessellation) -> ValidationReport:
    """Check the tessellation axioms, degree bounds and Euler characteristic 2.

    Returns the first violated rule; never raises on a bad graph.
    """
    for i, face in enumerate(t.faces):
        if any(not 0 <= v < t.num_vertices for v in face):
            return ValidationReport(False, "face_cycle", f"face {i} uses an undeclared vertex")
        if len(set(face)) != len(face):
            return ValidationReport(False, "face_cycle", f"face {i} repeats a vertex")
    for i, face in enumerate(t.faces):
        if len(face) < 3:
            return ValidationReport(False, "face_degree", f"face {i} has degree {len(face)} < 3")

    for edge, owners in sorted(t.edge_faces.items()):
        if len(owners) != 2 or owners[0] == owners[1]:
            return ValidationReport(
                False, "edge_two_faces", f"edge {edge} lies in faces {owners}, expected two distinct"
            )

    shared: dict[tuple[int, int], set[int]] = defaultdict(set)
    for v, fs in t.vertex_faces.items():
        for x in range(len(fs)):
            for y in range(x + 1, len(fs)):
                shared[(min(fs[x], fs[y]), max(fs[x], fs[y]))].add(v)
    for (f, g), common in sorted(shared.items()):
        if len(common) == 1:
            continue
        u, v = sorted(common) if len(common) == 2 else (None, None)
        if u is None or set(t.edge_faces.get(_edge(u, v), ())) != {f, g}:
            return ValidationReport(
                False,
                "face_intersection",
                f"faces {f} and {g} meet in vertices {sorted(common)}, not a single vertex or edge",
            )

    for v in t.vertices:
        deg = len(t.neighbors(v))
        if deg < 3:
            return ValidationReport(False, "vertex_degree", f"vertex {v} has degree {deg} < 3")

    for v in t.vertices:
        ring = t.face_ring(v)
        if len(ring) != len(t.vertex_faces[v]):
            return ValidationReport(
                False, "vertex_link", f"faces around vertex {v} do not form a single cycle"
            )

    chi = t.euler_characteristic()
    if chi != 2:
        return ValidationReport(False, "euler", f"V - E + F = {chi}, expected 2")
    return ValidationReport(True)


def vertex_census_of(t: PlanarTessellation) -> VertexCensus:
    counts = Counter(t.vertex_pattern(v) for v in t.vertices)
    return VertexCensus.from_pairs(counts.items())


def face_census_of(t: PlanarTessellation) -> FaceCensus:
    return FaceCensus.from_pairs(Counter(len(f) for f in t.faces).items())


# --------------------------------------------------------------------------
# generators and local surgery


def _check_order(n: int, least: int = 3) -> None:
    if isinstance(n, bool) or not isinstance(n, int) or n < least:
        raise DomainError(f"order must be an integer >= {least}, got {n!r}")


def generate_prism(n: int) -> PlanarTessellation:
    """Bottom ring ``0..n-1``, top ring ``n..2n-1``."""
    _check_order(n)
    faces = [tuple(range(n)), tuple(range(2 * n - 1, n - 1, -1))]
    faces += [(i, n + i, n + (i + 1) % n, (i + 1) % n) for i in range(n)]
    return PlanarTessellation(faces, 2 * n)


def generate_antiprism(n: int) -> PlanarTessellation:
    """Bottom ring ``0..n-1``, top ring ``n..2n-1``; n = 3 is the octahedron."""
    _check_order(n)
    faces = [tuple(range(n)), tuple(range(2 * n - 1, n - 1, -1))]
    for i in range(n):
        j = (i + 1) % n
        faces.append((i, n + i, j))
        faces.append((j, n + i, n + j))
    return PlanarTessellation(faces, 2 * n)


def generate_pyramid(n: int) -> PlanarTessellation:
    _check_order(n)
    faces = [tuple(range(n - 1, -1, -1))]
    faces += [(n, i, (i + 1) % n) for i in range(n)]
    return PlanarTessellation(faces, n + 1)


def cone(t: PlanarTessellation, face_index: int) -> PlanarTessellation:
    """Replace a face by a pyramid over it (new apex vertex)."""
    apex = t.num_vertices
    face = t.faces[face_index]
    faces = [f for i, f in enumerate(t.faces) if i != face_index]
    faces += [(apex, face[i], face[(i + 1) % len(face)]) for i in range(len(face))]
    return PlanarTessellation(faces, apex + 1)


def diminish(t: PlanarTessellation, v: int) -> PlanarTessellation:
    """Cut off a vertex whose faces are all triangles, leaving its link as a face."""
    ring = t.face_ring(v)
    if any(len(t.faces[i]) != 3 for i in ring):
        raise DomainError(f"vertex {v} is not surrounded by triangles only")
    link = []
    for i in ring:
        face = t.faces[i]
        j = face.index(v)
        link.append(face[(j + 1) % 3])
    # orient the new face against the removed triangles
    first = t.faces[ring[0]]
    j = first.index(v)
    if link[1] == first[(j + 2) % 3]:
        link = link[::-1]
    faces = [f for i, f in enumerate(t.faces) if i not in set(ring)] + [tuple(link)]
    keep = [u for u in t.vertices if u != v]
    relabel = {u: k for k, u in enumerate(keep)}
    return PlanarTessellation([tuple(relabel[u] for u in f) for f in faces], len(keep))


def dual(t: PlanarTessellation) -> PlanarTessellation:
    return PlanarTessellation([t.face_ring(v) for v in t.vertices], len(t.faces))


def tetrahedron() -> PlanarTessellation:
    return PlanarTessellation([(0, 1, 2), (0, 3, 1), (1, 3, 2), (2, 3, 0)], 4)


def icosahedron() -> PlanarTessellation:
    t = generate_antiprism(5)
    t = cone(t, 0)
    return cone(t, 0)


# --------------------------------------------------------------------------
# antiprism on the unit sphere


@dataclass(frozen=True)
class AntiprismEmbedding:
    n: int
    points: tuple[tuple[float, float, float], ...]
    edges: tuple[Edge, ...]
    faces: tuple[tuple[int, ...], ...]

    def edge_lengths(self) -> list[float]:
        return [great_circle_distance(self.points[i], self.points[j]) for i, j in self.edges]

    def vertex_total_angles(self) -> list[float]:
        totals = [0.0] * len(self.points)
        for face in self.faces:
            k = len(face)
            for j, v in enumerate(face):
                totals[v] += corner_angle(
                    self.points[v], self.points[face[j - 1]], self.points[face[(j + 1) % k]]
                )
        return totals


def _cross(u, v):
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


def _dot(u, v):
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def great_circle_distance(p, q) -> float:
    return math.atan2(math.sqrt(_dot(_cross(p, q), _cross(p, q))), _dot(p, q))


def corner_angle(vertex, a, b) -> float:
    """Angle at ``vertex`` between the great-circle arcs towards ``a`` and ``b``."""
    ta = tuple(x - _dot(a, vertex) * y for x, y in zip(a, vertex))
    tb = tuple(x - _dot(b, vertex) * y for x, y in zip(b, vertex))
    c = _cross(ta, tb)
    return math.atan2(math.sqrt(_dot(c, c)), _dot(ta, tb))


def antiprism_coordinates(n: int) -> AntiprismEmbedding:
    """Vertices of the n-gonal antiprism tiling of the unit sphere (n >= 4).

    Vertex ``i`` sits at longitude ``pi*i/n`` and alternates above and below
    the equator by a fixed latitude offset; ``i`` is adjacent to ``i+1`` and
    ``i+2`` (mod 2n).
    """
    _check_order(n, least=4)
    c = math.cos(math.pi / n)
    offset = math.atan(0.5 * math.sqrt(2.0 - 4.0 * c * c + 2.0 * c))
    points = []
    for i in range(2 * n):
        colat = 0.5 * math.pi + (-1) ** i * offset
        lon = math.pi * i / n
        points.append((math.sin(colat) * math.cos(lon), math.sin(colat) * math.sin(lon), math.cos(colat)))
    m = 2 * n
    edges = sorted({_edge(i, (i + 1) % m) for i in range(m)} | {_edge(i, (i + 2) % m) for i in range(m)})
    faces = [(i, (i + 1) % m, (i + 2) % m) for i in range(m)]
    faces.append(tuple(range(0, m, 2)))
    faces.append(tuple(range(m - 1, 0, -2)))
    return AntiprismEmbedding(n, tuple(points), tuple(edges), tuple(faces))


# --------------------------------------------------------------------------
# solids


@dataclass(frozen=True)
class SolidRecord:
    name: str
    vertex_census: VertexCensus
    face_census: FaceCensus
    tessellation: PlanarTessellation | None = field(default=None, compare=False, repr=False)
    family: str = ""

    @classmethod
    def from_tessellation(cls, name: str, t: PlanarTessellation, family: str = "") -> "SolidRecord":
        return cls(name, vertex_census_of(t), face_census_of(t), t, family)

    @property
    def num_vertices(self) -> int:
        return self.vertex_census.total

    @property
    def num_faces(self) -> int:
        return self.face_census.total

    @property
    def num_edges(self) -> int:
        return self.face_census.incidences // 2

    @property
    def max_side(self) -> float:
        return max_side(max(self.face_census.degrees))

    def handshake_violations(self) -> list[str]:
        """Incidence identities between the two censuses that fail."""
        problems = []
        vc, fc = self.vertex_census, self.face_census
        corners = Counter()
        for pattern, count in vc.entries:
            for d in pattern:
                corners[d] += count
        for d in sorted(set(corners) | set(fc.degrees)):
            expected = d * fc.as_dict().get(d, 0)
            if corners[d] != expected:
                problems.append(
                    f"{d}-gon corners: vertex census gives {corners[d]}, face census gives {expected}"
                )
        by_vertex = sum(len(p) * c for p, c in vc.entries)
        if by_vertex != fc.incidences:
            problems.append(
                f"2E: sum of vertex degrees is {by_vertex}, sum of face degrees is {fc.incidences}"
            )
        if fc.incidences % 2:
            problems.append(f"sum of face degrees {fc.incidences} is odd")
        else:
            chi = self.num_vertices - self.num_edges + self.num_faces
            if chi != 2:
                problems.append(f"Euler: V - E + F = {chi}, expected 2")
        return problems

    def tessellation_mismatch(self) -> list[str]:
        """Disagreements between the stored censuses and the full tessellation."""
        if self.tessellation is None:
            return []
        problems = []
        report = validate(self.tessellation)
        if not report:
            problems.append(f"tessellation invalid ({report.rule}): {report.detail}")
            return problems
        if vertex_census_of(self.tessellation) != self.vertex_census:
            problems.append("vertex census differs from the tessellation")
        if face_census_of(self.tessellation) != self.face_census:
            problems.append("face census differs from the tessellation")
        return problems

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "vertex_census": [[list(p), c] for p, c in self.vertex_census.entries],
            "face_census": [[d, c] for d, c in self.face_census.entries],
        }
        if self.family:
            out["family"] = self.family
        if self.tessellation is not None:
            out["faces"] = [list(f) for f in self.tessellation.faces]
        return out


def graph_a_c(s: SolidRecord, tol: float = ROOT_TOL) -> tuple[float, list[Pattern]]:
    """Smallest critical side length over the solid's vertex patterns."""
    values = {p: solve_pattern(p, tol).a_c for p in s.vertex_census.patterns}
    best = min(values.values())
    return best, [p for p, v in values.items() if v - best <= ARGMIN_TOL]


def area_at(s: SolidRecord, a: float) -> float:
    if not 0.0 < a <= s.max_side:
        raise DomainError(f"side length {a!r} outside (0, {s.max_side!r}] for {s.name}")
    return math.fsum(c * polygon_area(d, a) for d, c in s.face_census.entries)


def total_defect(s: SolidRecord, a: float) -> float:
    return math.fsum(c * angle_defect(p, a) for p, c in s.vertex_census.entries)


def gauss_bonnet_residual(s: SolidRecord, a: float) -> float:
    return abs(area_at(s, a) + total_defect(s, a) - FOUR_PI)


def critical_area(s: SolidRecord, tol: float = ROOT_TOL) -> float:
    return area_at(s, graph_a_c(s, tol)[0])


@dataclass(frozen=True)
class TilingWitness:
    pattern: Pattern
    a_c: float
    at_boundary: bool
    own_defect: float
    graph_defect: float
    certificate: str

    def to_dict(self) -> dict:
        return {
            "pattern": list(self.pattern),
            "a_c": self.a_c,
            "at_boundary": self.at_boundary,
            "own_defect": self.own_defect,
            "graph_defect": self.graph_defect,
            "certificate": self.certificate,
        }


@dataclass(frozen=True)
class TilingVerdict:
    name: str
    is_tiling: bool
    a_c: float
    witness: tuple[TilingWitness, ...]
    reason: str

    def __bool__(self) -> bool:
        return self.is_tiling

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "spherical_tiling": self.is_tiling,
            "a_c": self.a_c,
            "reason": self.reason,
            "witness": [w.to_dict() for w in self.witness],
        }


def is_spherical_tiling(s: SolidRecord, tol: float = ROOT_TOL, tol_eq: float = EQ_TOL) -> TilingVerdict:
    """Decide whether every vertex has zero defect at one common side length.

    A pattern passes if it is the graph minimiser, if it forms a certified
    zero pair with the minimiser, or if its critical side length and its
    defect there agree with the minimiser's within ``tol_eq``.  Any pattern
    whose defect is still positive at the hemisphere bound fails outright.
    """
    a_g, argmin = graph_a_c(s, tol)
    anchor = argmin[0]
    rows = []
    failures = []
    for p in s.vertex_census.patterns:
        solve = solve_pattern(p, tol)
        own = angle_defect(p, solve.a_c)
        at_graph = angle_defect(p, a_g)
        if solve.at_boundary:
            cert = "boundary"
            failures.append(f"{pattern_str(p)} keeps positive defect {own:.5g} at its bound 2*pi/{p[-1]}")
        elif p == anchor:
            cert = "argmin"
        elif in_z(p, anchor):
            cert = "zero-pair"
        elif abs(solve.a_c - a_g) <= tol_eq and abs(at_graph) <= tol_eq:
            cert = "numeric"
        else:
            cert = "mismatch"
            failures.append(
                f"{pattern_str(p)} has a_c {solve.a_c:.5g} and defect {at_graph:.5g} at a_c(G) = {a_g:.5g}"
            )
        rows.append(TilingWitness(p, solve.a_c, solve.at_boundary, own, at_graph, cert))
    reason = "; ".join(failures) if failures else f"all vertices flat at a = {a_g:.5g}"
    return TilingVerdict(s.name, not failures, a_g, tuple(rows), reason)


def legal_grid(s: SolidRecord, points: int = 20) -> list[float]:
    """``points`` side lengths evenly spread over ``(0, max_side]``."""
    top = s.max_side
    # pin the last point to the bound; top * points / points can round one ulp above it
    return [top * k / points for k in range(1, points)] + [top]
