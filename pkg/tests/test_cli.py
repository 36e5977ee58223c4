import io
import json
import math
import subprocess
import sys

import pytest

from spherarea.catalog import get_solid
from spherarea.cli import run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_patterns_list_counts():
    code, out, _ = call("patterns", "list")
    assert code == 0
    assert len(out.splitlines()) == 342
    code, out, _ = call("patterns", "list", "--format", "csv")
    assert len(out.splitlines()) == 343
    code, out, _ = call("patterns", "list", "--format", "json")
    assert json.loads(out)["count"] == 342


def test_patterns_solve_tetrahedral():
    code, out, _ = call("patterns", "solve", "3,3,3")
    assert code == 0 and "1.9106" in out
    code, out, _ = call("patterns", "solve", "3,3,3", "--format", "json")
    data = json.loads(out)
    assert abs(data["a_c"] - math.acos(-1 / 3)) < 1e-12
    assert data["at_boundary"] is False


@pytest.mark.parametrize(
    "pattern, message",
    [("3,3,3,3,3,3", "curvature not positive"), ("3,3,42", "face degree 42 > 41"), ("3,x,4", "cannot parse")],
)
def test_patterns_solve_rejects(pattern, message):
    code, out, err = call("patterns", "solve", pattern)
    assert code == 2
    assert message in err and out == ""


def test_catalog_export(tmp_path):
    path = tmp_path / "cat.json"
    code, out, _ = call("patterns", "catalog-export", "--format", "json", "--out", str(path))
    assert code == 0
    data = json.loads(path.read_text())
    assert data["count"] == 342 and len(data["boundary_set"]) == 103
    assert len(out.splitlines()) == 342


def test_solid_area_critical():
    code, out, _ = call("solid", "area", "J16")
    assert code == 0 and "0.25678" in out and "12.310" in out
    code, out, _ = call("solid", "area", "J16", "--format", "json")
    data = json.loads(out)
    assert abs(data["area"] - (4 * math.pi - 0.2567764409514)) < 1e-10
    code, out, _ = call("solid", "area", "Gamma")
    assert "0.20961" in out


def test_solid_area_given_side():
    code, out, _ = call("solid", "area", "cube", "--side", "0.5", "--format", "json")
    assert code == 0 and json.loads(out)["side_kind"] == "given"
    code, _, err = call("solid", "area", "cube", "--side", "5")
    assert code == 2 and "outside" in err


def test_solid_classify():
    code, out, _ = call("solid", "classify", "antiprism:17")
    assert code == 0
    assert out.splitlines()[0] == "antiprism:17: spherical tiling"
    assert "a_c = 0.36497" in out
    code, out, _ = call("solid", "classify", "J2")
    assert code == 0 and "not a spherical tiling" in out and "boundary" in out


def test_solid_info():
    code, out, _ = call("solid", "info", "J62")
    assert code == 0 and "V = 10, E = 20, F = 12" in out
    code, _, err = call("solid", "info", "nope")
    assert code == 2 and "unknown solid" in err


def write(tmp_path, obj, name="c.json"):
    path = tmp_path / name
    path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(path)


def test_solid_check(tmp_path):
    good = write(tmp_path, [get_solid("J16").to_dict(), get_solid("cube").to_dict()])
    code, out, _ = call("solid", "check", good)
    assert code == 0 and "ok (2 solids)" in out

    bad = get_solid("J16").to_dict()
    bad["face_census"] = [[3, 10], [4, 6]]
    code, out, _ = call("solid", "check", write(tmp_path, bad, "bad.json"))
    assert code == 3 and "INVALID" in out and "4-gon corners" in out

    broken = get_solid("cube").to_dict()
    broken["faces"][0] = [0, 1, 2, 2]
    code, out, _ = call("solid", "check", write(tmp_path, broken, "broken.json"), "--format", "json")
    assert code == 3 and json.loads(out)["ok"] is False

    code, _, err = call("solid", "check", write(tmp_path, "[{", "syntax.json"))
    assert code == 2 and "syntax.json:1:" in err
    code, _, err = call("solid", "check", str(tmp_path / "missing.json"))
    assert code == 2


def test_extremal_area_min():
    code, out, _ = call("extremal", "area-min")
    assert code == 0
    assert "Area_min >= 0.083755 at (3,11,13)" in out
    assert "0.12824 at (3,7,41)" in out


def test_extremal_gap(tmp_path):
    path = tmp_path / "gap.json"
    code, out, _ = call("extremal", "gap", "--epsilon", "1e-5", "--out", str(path), "--format", "json")
    assert code == 0
    assert "K_a_c(3,7,29)(3,9,16)" in out and "robustness   ok" in out
    data = json.loads(path.read_text())
    assert data["epsilon"] == 1e-5 and len(data["top"]) == 20
    assert data["robustness"]["ok"] is True


def test_extremal_gap_margin_guard():
    code, _, err = call("extremal", "gap", "--epsilon", "1e-2")
    assert code == 2 and "epsilon" in err


def test_extremal_gap_robustness_failure():
    # at 1e-3 the true minimum (about 1.6e-5) is cut away, so +/- runs disagree
    code, out, _ = call("extremal", "gap", "--epsilon", "1e-3")
    assert code == 4 and "FAILED" in out


def test_extremal_witnesses():
    code, out, _ = call("extremal", "witnesses", "--format", "json")
    data = json.loads(out)
    assert code == 0
    assert data["gap_lower"]["solid"] == "J16"
    assert data["probe"]["between"] == []


def test_json_is_deterministic():
    assert call("extremal", "gap", "--format", "json")[1] == call("extremal", "gap", "--format", "json")[1]
    assert call("solid", "classify", "Gamma", "--format", "json")[1] == call("solid", "classify", "Gamma", "--format", "json")[1]


@pytest.mark.parametrize(
    "argv",
    [
        ("patterns", "list", "--tol-root", "-1"),
        ("patterns", "list", "--tol-eq", "0"),
        ("extremal", "gap", "--jobs", "0"),
        ("patterns", "list", "--format", "xml"),
        ("nonsense",),
        (),
    ],
)
def test_bad_flags(argv):
    assert call(*argv)[0] == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "spherarea.cli", "patterns", "solve", "3,3,4"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and "1.5708" in proc.stdout
