"""``spherarea`` command line.

Exit codes: 0 success, 2 bad input, 3 validation failure, 4 robustness
failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Sequence

from . import extremal
from .catalog import get_solid, load_catalog
from .errors import (
    CatalogError,
    CatalogSyntaxError,
    DomainError,
    MarginTooLarge,
    NotAdmissible,
    RobustnessError,
)
from .patterns import critical_side_length, enumerate_admissible, parse_pattern, phi
from .reporting import fmt5, pattern_str, to_csv, to_json
from .spherical_core import ROOT_TOL, angle_defect
from .tessellation import (
    EQ_TOL,
    FOUR_PI,
    area_at,
    gauss_bonnet_residual,
    graph_a_c,
    is_spherical_tiling,
    legal_grid,
    validate,
)

EXIT_OK = 0
EXIT_BAD_INPUT = 2
EXIT_VALIDATION = 3
EXIT_ROBUSTNESS = 4

GAUSS_BONNET_TOL = 1e-9
AGREEMENT_TOL = 1e-9
ROBUSTNESS_MARGIN = 1e-5


class BadInput(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    subcommand: str
    fmt: str = "text"
    out: Path | None = None
    tol_root: float = ROOT_TOL
    tol_eq: float | None = None
    jobs: int = 1

    def __post_init__(self):
        if self.fmt not in ("json", "csv", "text"):
            raise BadInput(f"unknown format {self.fmt!r}")
        if not (self.tol_root > 0 and math.isfinite(self.tol_root)):
            raise BadInput(f"--tol-root must be positive, got {self.tol_root!r}")
        if self.tol_eq is not None and not (self.tol_eq > 0 and math.isfinite(self.tol_eq)):
            raise BadInput(f"--tol-eq must be positive, got {self.tol_eq!r}")
        if self.jobs < 1:
            raise BadInput(f"--jobs must be at least 1, got {self.jobs!r}")


@dataclass
class Output:
    """A command result in all three renderings plus its exit code."""

    payload: Any
    text: str
    header: Sequence[str] = ()
    rows: list = field(default_factory=list)
    code: int = EXIT_OK

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return to_json(self.payload)
        if fmt == "csv":
            return to_csv(self.header, self.rows)
        return self.text if self.text.endswith("\n") else self.text + "\n"


# --------------------------------------------------------------------------
# patterns


def cmd_patterns_list(cfg: RunConfig, args) -> Output:
    catalog = enumerate_admissible(cfg.tol_root)
    rows = catalog.rows()
    text = "\n".join(
        f"{pattern_str(p)}\tphi={phi(p)}\ta_c={fmt5(catalog.a_c(p))}" for p in catalog
    )
    header = ["pattern", "phi", "a_c", "at_boundary", "residual"]
    csv_rows = [[r["pattern"], r["phi"], r["a_c"], r["at_boundary"], r["residual"]] for r in rows]
    return Output({"count": len(catalog), "patterns": rows}, text, header, csv_rows)


def cmd_patterns_solve(cfg: RunConfig, args) -> Output:
    try:
        pattern = parse_pattern(args.pattern)
    except ValueError as exc:
        raise BadInput(str(exc)) from exc
    solve = critical_side_length(pattern, cfg.tol_root)
    k = angle_defect(solve.pattern, solve.a_c)
    payload = solve.to_dict() | {"defect_at_a_c": k}
    text = (
        f"pattern      {pattern_str(solve.pattern)}\n"
        f"phi          {phi(solve.pattern)}\n"
        f"a_c          {fmt5(solve.a_c)}\n"
        f"at_boundary  {'yes' if solve.at_boundary else 'no'}\n"
        f"K(a_c)       {fmt5(k)}"
    )
    header = list(payload)
    return Output(payload, text, header, [[payload[h] for h in header]])


def cmd_patterns_export(cfg: RunConfig, args) -> Output:
    out = cmd_patterns_list(cfg, args)
    catalog = enumerate_admissible(cfg.tol_root)
    out.payload["boundary_set"] = [list(p) for p in catalog.boundary]
    return out


# --------------------------------------------------------------------------
# solids


def _solid(name: str):
    try:
        return get_solid(name)
    except KeyError:
        raise BadInput(f"unknown solid {name!r}") from None
    except CatalogError as exc:
        raise BadInput(f"extra catalog: {exc}") from exc


def cmd_solid_info(cfg: RunConfig, args) -> Output:
    s = _solid(args.name)
    a, argmin = graph_a_c(s, cfg.tol_root)
    area = area_at(s, a)
    payload = s.to_dict() | {
        "vertices": s.num_vertices,
        "edges": s.num_edges,
        "faces_total": s.num_faces,
        "max_side": s.max_side,
        "a_c": a,
        "argmin": [list(p) for p in argmin],
        "critical_area": area,
    }
    payload.pop("faces", None)
    lines = [
        f"{s.name}" + (f" ({s.family})" if s.family else ""),
        f"V = {s.num_vertices}, E = {s.num_edges}, F = {s.num_faces}",
        "vertex census: " + ", ".join(f"({pattern_str(p)}) x{c}" for p, c in s.vertex_census.entries),
        "face census:   " + ", ".join(f"{d}-gon x{c}" for d, c in s.face_census.entries),
        f"a_c           {fmt5(a)} at " + "; ".join(pattern_str(p) for p in argmin),
        f"critical area {fmt5(area)} = 4*pi - {fmt5(FOUR_PI - area)}",
    ]
    header = ["name", "vertices", "edges", "faces", "a_c", "critical_area"]
    return Output(payload, "\n".join(lines), header, [[s.name, s.num_vertices, s.num_edges, s.num_faces, a, area]])


def cmd_solid_area(cfg: RunConfig, args) -> Output:
    s = _solid(args.name)
    if args.side is None:
        a = graph_a_c(s, cfg.tol_root)[0]
        kind = "critical"
    else:
        a = args.side
        kind = "given"
    try:
        area = area_at(s, a)
    except DomainError as exc:
        raise BadInput(str(exc)) from exc
    payload = {"name": s.name, "side": a, "side_kind": kind, "area": area, "deficit": FOUR_PI - area}
    text = f"{s.name}: area {fmt5(area)} = 4*pi - {fmt5(FOUR_PI - area)} at {kind} side {fmt5(a)}"
    header = list(payload)
    return Output(payload, text, header, [[payload[h] for h in header]])


def cmd_solid_classify(cfg: RunConfig, args) -> Output:
    s = _solid(args.name)
    verdict = is_spherical_tiling(s, cfg.tol_root, cfg.tol_eq or EQ_TOL)
    label = "spherical tiling" if verdict else "not a spherical tiling"
    lines = [f"{s.name}: {label}", f"a_c = {fmt5(verdict.a_c)}", verdict.reason]
    for w in verdict.witness:
        lines.append(
            f"  {pattern_str(w.pattern)}\ta_c={fmt5(w.a_c)}\tK(a_c(G))={fmt5(w.graph_defect)}\t{w.certificate}"
        )
    header = ["pattern", "a_c", "at_boundary", "own_defect", "graph_defect", "certificate"]
    rows = [[w.pattern, w.a_c, w.at_boundary, w.own_defect, w.graph_defect, w.certificate] for w in verdict.witness]
    return Output(verdict.to_dict(), "\n".join(lines), header, rows)


def cmd_solid_check(cfg: RunConfig, args) -> Output:
    path = Path(args.file)
    if not path.is_file():
        raise BadInput(f"no such file: {path}")
    tol = cfg.tol_eq or GAUSS_BONNET_TOL
    try:
        records = load_catalog(path)
    except CatalogSyntaxError as exc:
        raise BadInput(str(exc)) from exc
    except CatalogError as exc:
        payload = {"file": str(path), "ok": False, "error": str(exc), "solids": []}
        return Output(payload, f"{path}: INVALID\n{exc}", ["name", "ok", "detail"], [["", False, str(exc)]], EXIT_VALIDATION)

    results = []
    for s in records:
        problems = []
        if s.tessellation is not None:
            report = validate(s.tessellation)
            if not report:
                problems.append(f"{report.rule}: {report.detail}")
        worst = max(gauss_bonnet_residual(s, a) for a in legal_grid(s))
        if not worst < tol:
            problems.append(f"Gauss-Bonnet residual {worst:.3g} not below {tol:g}")
        results.append({"name": s.name, "ok": not problems, "gauss_bonnet_max": worst, "problems": problems})
    ok = all(r["ok"] for r in results)
    lines = [f"{path}: {'ok' if ok else 'INVALID'} ({len(results)} solids)"]
    for r in results:
        lines.append(f"  {r['name']}: {'ok' if r['ok'] else '; '.join(r['problems'])}")
    rows = [[r["name"], r["ok"], "; ".join(r["problems"])] for r in results]
    payload = {"file": str(path), "ok": ok, "solids": results}
    return Output(payload, "\n".join(lines), ["name", "ok", "detail"], rows, EXIT_OK if ok else EXIT_VALIDATION)


# --------------------------------------------------------------------------
# extremal


def cmd_extremal_area_min(cfg: RunConfig, args) -> Output:
    report = extremal.area_min_search(cfg.tol_root)
    first, second = report.first, report.second
    text = (
        f"lower bound  Area_min >= {fmt5(first.area)} at ({pattern_str(first.pattern)})\n"
        f"second       {fmt5(second.area)} at ({pattern_str(second.pattern)})\n"
        f"separation   {fmt5(report.separation)} (gate {fmt5(report.separation_bound)}: "
        f"{'ok' if report.separated else 'FAILED'})"
    )
    header = ["pattern", "a_c", "area", "uncertainty"]
    rows = [[e.pattern, e.a_c, e.area, e.uncertainty] for e in report.ranked]
    code = EXIT_OK if report.separated else EXIT_ROBUSTNESS
    return Output(report.to_dict(), text, header, rows, code)


def cmd_extremal_gap(cfg: RunConfig, args) -> Output:
    eps = args.epsilon
    main_run = extremal.gap_search(eps, cfg.tol_root, cfg.jobs)
    margin = max(abs(eps), ROBUSTNESS_MARGIN)
    runs = {eps: main_run}
    for e in (margin, -margin):
        if e not in runs:
            runs[e] = extremal.gap_search(e, cfg.tol_root, cfg.jobs)
    problems = []
    if not main_run.separated:
        problems.append("first and second minima not separated")
    tol = cfg.tol_eq or AGREEMENT_TOL
    for e, run in runs.items():
        if e == eps:
            continue
        try:
            extremal.require_agreement(main_run, run, tol)
        except RobustnessError as exc:
            problems.append(str(exc))

    f, s = main_run.first, main_run.second
    payload = main_run.to_dict() | {
        "robustness": {
            "runs": [
                {"epsilon": e, "size": r.size, "first": r.first.to_dict(), "second": r.second.to_dict()}
                for e, r in sorted(runs.items())
            ],
            "ok": not problems,
            "problems": problems,
        }
    }
    lines = [
        f"epsilon      {eps:g}   |S| = {main_run.size} of {main_run.candidates} candidates",
        f"first        {fmt5(f.k)} at K_a_c({pattern_str(f.p)})({pattern_str(f.q)})",
        f"second       {fmt5(s.k)} at K_a_c({pattern_str(s.p)})({pattern_str(s.q)})",
        f"upper bound  Area_max <= 4*pi - {fmt5(f.k)}",
        "robustness   " + ("ok (" + ", ".join(f"{e:g}" for e in sorted(runs)) + ")" if not problems else "FAILED"),
    ]
    lines += [f"  {p}" for p in problems]
    header = ["rank", "p", "q", "k", "uncertainty"]
    rows = [[i + 1, e.p, e.q, e.k, e.uncertainty] for i, e in enumerate(main_run.entries[: extremal.TOP_ENTRIES])]
    return Output(payload, "\n".join(lines), header, rows, EXIT_ROBUSTNESS if problems else EXIT_OK)


def cmd_extremal_witnesses(cfg: RunConfig, args) -> Output:
    gamma = extremal.area_min_upper_witness(cfg.tol_root)
    j16 = extremal.gap_upper_witness(cfg.tol_root)
    probe = extremal.neighborhood_probe((3, 7, 29), (3, 9, 16), cfg.tol_root)
    payload = {
        "area_min_upper": gamma.to_dict(),
        "gap_lower": j16.to_dict(),
        "probe": probe.to_dict(),
    }
    lines = [
        f"Gamma  a_c = {fmt5(gamma.a_c)} at {'; '.join(pattern_str(p) for p in gamma.argmin)}"
        f"   Area_min <= {fmt5(gamma.area)}",
        f"J16    a_c = {fmt5(j16.a_c)} at {'; '.join(pattern_str(p) for p in j16.argmin)}"
        f"   4*pi - {fmt5(j16.deficit)} <= Area_max",
        f"probe  a_c(3,7,29) = {fmt5(probe.a_c_p)}, a_c(3,9,16) = {fmt5(probe.a_c_q)},"
        f" {len(probe.between)} patterns between",
    ]
    header = ["solid", "a_c", "area", "deficit"]
    rows = [[w.solid, w.a_c, w.area, w.deficit] for w in (gamma, j16)]
    return Output(payload, "\n".join(lines), header, rows)


# --------------------------------------------------------------------------
# parser


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def _leaf_options() -> argparse.ArgumentParser:
    leaf = argparse.ArgumentParser(add_help=False)
    leaf.add_argument("--format", dest="fmt", choices=("json", "csv", "text"), default="text")
    leaf.add_argument("--out", type=Path, help="write the full report here")
    leaf.add_argument("--tol-root", type=float, default=ROOT_TOL, help="bisection bracket width")
    leaf.add_argument("--tol-eq", type=float, default=None, help="equality tolerance for checks")
    leaf.add_argument("--jobs", type=_positive_int, default=1, help="worker processes")
    return leaf


def build_parser() -> argparse.ArgumentParser:
    leaf = _leaf_options()
    parser = argparse.ArgumentParser(
        prog="spherarea",
        description="Regular spherical polyhedral surfaces: critical side lengths, areas and extremal bounds.",
    )
    groups = parser.add_subparsers(dest="command", required=True)

    def add(group, name: str, handler: Callable, help: str):
        p = group.add_parser(name, parents=[leaf], help=help)
        p.set_defaults(handler=handler, subcommand=name)
        return p

    patterns = groups.add_parser("patterns", help="admissible vertex patterns").add_subparsers(
        dest="subcommand", required=True
    )
    add(patterns, "list", cmd_patterns_list, "all admissible patterns with curvature and a_c")
    add(patterns, "solve", cmd_patterns_solve, "critical side length of one pattern").add_argument(
        "pattern", help="comma-separated face degrees, e.g. 3,7,29"
    )
    add(patterns, "catalog-export", cmd_patterns_export, "full catalog as JSON or CSV")

    solid = groups.add_parser("solid", help="solids from the builtin or an extra catalog").add_subparsers(
        dest="subcommand", required=True
    )
    add(solid, "info", cmd_solid_info, "censuses and critical data").add_argument("name")
    area = add(solid, "area", cmd_solid_area, "area at a side length (default: critical)")
    area.add_argument("name")
    area.add_argument("--side", type=float, default=None)
    add(solid, "classify", cmd_solid_classify, "spherical tiling verdict").add_argument("name")
    add(solid, "check", cmd_solid_check, "validate a catalog file").add_argument("file")

    ext = groups.add_parser("extremal", help="exhaustive extremal searches").add_subparsers(
        dest="subcommand", required=True
    )
    add(ext, "area-min", cmd_extremal_area_min, "minimal critical area lower bound")
    add(ext, "gap", cmd_extremal_gap, "area gap search").add_argument(
        "--epsilon", type=float, default=0.0, help="margin, |epsilon| <= 1e-3"
    )
    add(ext, "witnesses", cmd_extremal_witnesses, "upper-bound witness solids")
    return parser


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_BAD_INPUT if exc.code else EXIT_OK

    try:
        cfg = RunConfig(args.command, args.subcommand, args.fmt, args.out, args.tol_root, args.tol_eq, args.jobs)
        result = args.handler(cfg, args)
    except (BadInput, NotAdmissible, MarginTooLarge, DomainError) as exc:
        print(f"spherarea: error: {exc}", file=stderr)
        return EXIT_BAD_INPUT
    except RobustnessError as exc:
        print(f"spherarea: robustness failure: {exc}", file=stderr)
        return EXIT_ROBUSTNESS

    rendered = result.render(cfg.fmt)
    if cfg.out is not None:
        cfg.out.write_text(rendered, encoding="utf-8")
        stdout.write(result.render("text"))
    else:
        stdout.write(rendered)
    return result.code


def main(argv: Sequence[str] | None = None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
