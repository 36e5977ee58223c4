"""Builtin solids and the JSON catalog format.

A catalog file holds one record or a list of records::

    {"name": "J16",
     "vertex_census": [[[3, 3, 4, 4], 10], [[3, 3, 3, 3, 3], 2]],
     "face_census": [[3, 10], [4, 5]],
     "faces": [[0, 1, 2], ...]}          # optional

``family`` is an optional free-form tag.  Every record is checked against
the incidence identities and, when faces are given, against its own
tessellation.
"""

from __future__ import annotations

import json
import os
from collections import deque
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Any, Iterable, Sequence

from .errors import CatalogError, CatalogSyntaxError, DomainError
from .tessellation import (
    FaceCensus,
    PlanarTessellation,
    SolidRecord,
    VertexCensus,
    cone,
    diminish,
    dual,
    generate_antiprism,
    generate_prism,
    generate_pyramid,
    icosahedron,
    tetrahedron,
)

CATALOG_ENV = "SPHERAREA_CATALOG"
PRISM_ORDERS = range(3, 61)
_KNOWN_KEYS = {"name", "family", "vertex_census", "face_census", "faces"}

TILING_JOHNSON = (
    "J1", "J3", "J6", "J11", "J19", "J27", "J34", "J37", "J62", "J63",
    "J72", "J73", "J74", "J75", "J76", "J77", "J78", "J79", "J80", "J81", "J82", "J83",
)
NON_TILING = ("J2", "J4", "J5", "J16", "Gamma")


def _is_int(x: Any) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def _parse_record(raw: Any, where: str) -> SolidRecord:
    if not isinstance(raw, dict):
        raise CatalogError("record must be a JSON object", where)
    unknown = set(raw) - _KNOWN_KEYS
    if unknown:
        raise CatalogError(f"unknown field(s) {sorted(unknown)}", where)
    name = raw.get("name")
    if not isinstance(name, str) or not name:
        raise CatalogError("missing or empty string", f"{where} field name")
    where = f"{where} ({name})"

    vertex_pairs = []
    vc = raw.get("vertex_census")
    if not isinstance(vc, list) or not vc:
        raise CatalogError("must be a non-empty list", f"{where} field vertex_census")
    for i, entry in enumerate(vc):
        loc = f"{where} field vertex_census[{i}]"
        if not (isinstance(entry, list) and len(entry) == 2 and isinstance(entry[0], list)):
            raise CatalogError("expected [[f1, ..., fN], count]", loc)
        pattern, count = entry
        if not all(_is_int(f) for f in pattern):
            raise CatalogError("face degrees must be integers", f"{loc}[0]")
        if not _is_int(count) or count < 1:
            raise CatalogError(f"count must be a positive integer, got {count!r}", f"{loc}[1]")
        vertex_pairs.append((pattern, count))

    face_pairs = []
    fc = raw.get("face_census")
    if not isinstance(fc, list) or not fc:
        raise CatalogError("must be a non-empty list", f"{where} field face_census")
    for i, entry in enumerate(fc):
        loc = f"{where} field face_census[{i}]"
        if not (isinstance(entry, list) and len(entry) == 2 and all(_is_int(x) for x in entry)):
            raise CatalogError("expected [degree, count]", loc)
        if entry[1] < 1:
            raise CatalogError(f"count must be a positive integer, got {entry[1]!r}", f"{loc}[1]")
        face_pairs.append(tuple(entry))

    tessellation = None
    if raw.get("faces") is not None:
        faces = raw["faces"]
        if not isinstance(faces, list) or not all(
            isinstance(f, list) and all(_is_int(v) for v in f) for f in faces
        ):
            raise CatalogError("expected a list of vertex-index lists", f"{where} field faces")
        tessellation = PlanarTessellation(faces)

    try:
        record = SolidRecord(
            name,
            VertexCensus.from_pairs(vertex_pairs),
            FaceCensus.from_pairs(face_pairs),
            tessellation,
            raw.get("family", ""),
        )
    except DomainError as exc:
        raise CatalogError(str(exc), where) from exc

    problems = record.handshake_violations() + record.tessellation_mismatch()
    if problems:
        raise CatalogError("handshake failed: " + "; ".join(problems), where)
    return record


def parse_catalog(text: str, source: str = "<string>") -> list[SolidRecord]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CatalogSyntaxError(exc.msg, f"{source}:{exc.lineno}:{exc.colno}") from exc
    if isinstance(data, dict):
        data = [data]
    if not isinstance(data, list):
        raise CatalogError("top level must be a record or a list of records", source)
    records = [_parse_record(raw, f"{source} record {i}") for i, raw in enumerate(data)]
    names = [r.name.lower() for r in records]
    duplicates = sorted({n for n in names if names.count(n) > 1})
    if duplicates:
        raise CatalogError(f"duplicate solid names {duplicates}", source)
    return records


def load_catalog(path: str | os.PathLike) -> list[SolidRecord]:
    path = Path(path)
    return parse_catalog(path.read_text(encoding="utf-8"), str(path))


def _distances(t: PlanarTessellation, start: int) -> dict[int, int]:
    dist = {start: 0}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for u in sorted(t.neighbors(v)):
            if u not in dist:
                dist[u] = dist[v] + 1
                queue.append(u)
    return dist


def _diminished_icosahedron(count: int) -> PlanarTessellation:
    """Remove ``count`` icosahedron vertices pairwise at graph distance 2."""
    t = icosahedron()
    chosen: list[int] = []
    table = {v: _distances(t, v) for v in t.vertices}
    for v in t.vertices:
        if len(chosen) == count:
            break
        if all(table[c][v] == 2 for c in chosen):
            chosen.append(v)
    for v in sorted(chosen, reverse=True):
        t = diminish(t, v)
    return t


def _constructed() -> dict[str, tuple[str, PlanarTessellation]]:
    ico = icosahedron()
    return {
        "tetrahedron": ("platonic", tetrahedron()),
        "cube": ("platonic", generate_prism(4)),
        "octahedron": ("platonic", generate_antiprism(3)),
        "dodecahedron": ("platonic", dual(ico)),
        "icosahedron": ("platonic", ico),
        "J1": ("johnson", generate_pyramid(4)),
        "J2": ("johnson", generate_pyramid(5)),
        "J11": ("johnson", cone(generate_antiprism(5), 0)),
        "J16": ("johnson", cone(cone(generate_prism(5), 0), 0)),
        "J62": ("johnson", _diminished_icosahedron(2)),
        "J63": ("johnson", _diminished_icosahedron(3)),
    }


def _data_records() -> list[SolidRecord]:
    text = resources.files("spherarea").joinpath("data/solids.json").read_text(encoding="utf-8")
    return parse_catalog(text, "solids.json")


def prism_record(n: int) -> SolidRecord:
    return SolidRecord.from_tessellation(f"prism:{n}", generate_prism(n), "prism")


def antiprism_record(n: int) -> SolidRecord:
    return SolidRecord.from_tessellation(f"antiprism:{n}", generate_antiprism(n), "antiprism")


@lru_cache(maxsize=1)
def _builtin(prism_orders: tuple[int, ...]) -> tuple[SolidRecord, ...]:
    built = _constructed()
    records: list[SolidRecord] = []
    for name, (family, t) in built.items():
        if family == "platonic":
            records.append(SolidRecord.from_tessellation(name, t, family))
    for record in _data_records():
        if record.name in built:
            family, t = built[record.name]
            with_faces = SolidRecord(record.name, record.vertex_census, record.face_census, t, record.family)
            problems = with_faces.tessellation_mismatch()
            if problems:
                raise CatalogError("; ".join(problems), f"builtin {record.name}")
            record = with_faces
        records.append(record)
    records += [prism_record(n) for n in prism_orders]
    records += [antiprism_record(n) for n in prism_orders]
    return tuple(records)


def builtin_catalog(prism_orders: Iterable[int] = PRISM_ORDERS) -> list[SolidRecord]:
    """Platonic, Archimedean, selected Johnson solids, Gamma, prisms and antiprisms."""
    return list(_builtin(tuple(prism_orders)))


def extra_catalog() -> list[SolidRecord]:
    path = os.environ.get(CATALOG_ENV)
    return load_catalog(path) if path else []


def get_solid(name: str, extra: Sequence[SolidRecord] | None = None) -> SolidRecord:
    """Look up ``name`` (case-insensitive); ``prism:N`` / ``antiprism:N`` for any N >= 3."""
    key = name.strip()
    family, _, order = key.partition(":")
    if order and family.lower() in ("prism", "antiprism"):
        try:
            n = int(order)
        except ValueError:
            raise KeyError(name) from None
        if n < 3:
            raise KeyError(name)
        return prism_record(n) if family.lower() == "prism" else antiprism_record(n)
    pool = list(extra if extra is not None else extra_catalog()) + builtin_catalog(())
    for record in pool:
        if record.name.lower() == key.lower():
            return record
    raise KeyError(name)
