import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from spherarea.errors import DomainError
from spherarea.patterns import solve_pattern
from spherarea.tessellation import (
    FOUR_PI,
    FaceCensus,
    PlanarTessellation,
    SolidRecord,
    VertexCensus,
    antiprism_coordinates,
    area_at,
    cone,
    diminish,
    dual,
    face_census_of,
    gauss_bonnet_residual,
    generate_antiprism,
    generate_prism,
    generate_pyramid,
    graph_a_c,
    icosahedron,
    is_spherical_tiling,
    legal_grid,
    tetrahedron,
    total_defect,
    validate,
    vertex_census_of,
)


def torus(k=4):
    def v(i, j):
        return (i % k) * k + (j % k)

    return PlanarTessellation(
        [(v(i, j), v(i + 1, j), v(i + 1, j + 1), v(i, j + 1)) for i in range(k) for j in range(k)]
    )


def bowtie():
    """Two tetrahedra sharing vertex 0 only."""
    t = tetrahedron().faces
    return PlanarTessellation(t + tuple(tuple(v + 3 if v else 0 for v in f) for f in t))


@pytest.mark.parametrize("n", range(3, 61))
def test_generators_are_valid(n):
    for t, (V, E, F) in (
        (generate_prism(n), (2 * n, 3 * n, n + 2)),
        (generate_antiprism(n), (2 * n, 4 * n, 2 * n + 2)),
        (generate_pyramid(n), (n + 1, 2 * n, n + 1)),
    ):
        assert validate(t), validate(t)
        assert (t.num_vertices, len(t.edges), len(t.faces)) == (V, E, F)


def test_platonic_constructions():
    assert vertex_census_of(tetrahedron()).as_dict() == {(3, 3, 3): 4}
    assert vertex_census_of(icosahedron()).as_dict() == {(3, 3, 3, 3, 3): 12}
    dodeca = dual(icosahedron())
    assert validate(dodeca)
    assert vertex_census_of(dodeca).as_dict() == {(5, 5, 5): 20}
    assert vertex_census_of(dual(generate_prism(4))).as_dict() == {(3, 3, 3, 3): 6}


def test_face_ring_is_cyclic():
    t = generate_prism(5)
    ring = t.face_ring(0)
    assert sorted(len(t.faces[i]) for i in ring) == [4, 4, 5]
    for a, b in zip(ring, ring[1:] + ring[:1]):
        assert len(set(t.faces[a]) & set(t.faces[b])) == 2


def test_cone_and_diminish_are_inverse_on_censuses():
    t = generate_antiprism(5)
    coned = cone(t, 0)
    assert validate(coned)
    apex = coned.num_vertices - 1
    back = diminish(coned, apex)
    assert validate(back)
    assert vertex_census_of(back) == vertex_census_of(t)
    assert face_census_of(back) == face_census_of(t)


def test_diminish_needs_triangles():
    with pytest.raises(DomainError):
        diminish(generate_prism(4), 0)


@pytest.mark.parametrize(
    "faces, num_vertices, rule",
    [
        ([(0, 1, 1), (0, 1, 2)], None, "face_cycle"),
        ([(0, 1, 5)], 3, "face_cycle"),
        ([(0, 1), (1, 0)], None, "face_degree"),
        (generate_prism(4).faces[1:], None, "edge_two_faces"),
        ([(0, 1, 2), (0, 2, 1)], None, "face_intersection"),
        (bowtie().faces, None, "vertex_link"),
        (torus().faces, None, "euler"),
    ],
)
def test_validation_rules(faces, num_vertices, rule):
    report = validate(PlanarTessellation(faces, num_vertices))
    assert not report
    assert report.rule == rule
    assert report.detail


def test_validation_never_raises_on_garbage():
    assert not validate(PlanarTessellation([]))
    assert not validate(PlanarTessellation([(0, 1, 2)]))


def test_census_validation():
    with pytest.raises(DomainError):
        VertexCensus((((3, 4, 3), 2),))
    with pytest.raises(DomainError):
        VertexCensus((((3, 3, 3), 0),))
    with pytest.raises(DomainError):
        FaceCensus(((2, 4),))


def test_handshake_detects_inconsistent_census():
    good = SolidRecord.from_tessellation("cube", generate_prism(4))
    assert good.handshake_violations() == []
    bad = SolidRecord("bad", VertexCensus.from_pairs([((4, 4, 4), 6)]), good.face_census)
    problems = bad.handshake_violations()
    assert any("4-gon corners" in p for p in problems)
    assert any("Euler" in p or "2E" in p for p in problems)


@pytest.mark.parametrize("n", range(4, 42))
def test_antiprism_coordinates(n):
    e = antiprism_coordinates(n)
    lengths = e.edge_lengths()
    assert len(lengths) == 4 * n
    assert max(lengths) - min(lengths) < 1e-10
    assert max(abs(t - 2 * math.pi) for t in e.vertex_total_angles()) < 1e-10
    assert all(abs(math.fsum(x * x for x in p) - 1) < 1e-14 for p in e.points)
    # the embedded side is the critical side of the antiprism vertex
    assert lengths[0] == pytest.approx(solve_pattern((3, 3, 3, n)).a_c, abs=1e-10)


def test_antiprism_five_is_icosahedral():
    e = antiprism_coordinates(5)
    assert all(abs(x - math.atan(2)) < 1e-10 for x in e.edge_lengths())


def test_antiprism_coordinates_order():
    with pytest.raises(DomainError):
        antiprism_coordinates(3)


@given(st.integers(3, 80), st.floats(0.01, 1.0), st.booleans())
def test_gauss_bonnet_prisms(n, frac, anti):
    t = generate_antiprism(n) if anti else generate_prism(n)
    s = SolidRecord.from_tessellation("x", t)
    a = s.max_side * frac
    assert abs(area_at(s, a) + total_defect(s, a) - FOUR_PI) < 1e-9


def test_legal_grid_stays_in_domain():
    for n in range(3, 100):
        s = SolidRecord.from_tessellation("p", generate_prism(n))
        grid = legal_grid(s)
        assert len(grid) == 20 and grid[-1] == s.max_side
        assert max(gauss_bonnet_residual(s, a) for a in grid) < 1e-9


def test_area_domain():
    s = SolidRecord.from_tessellation("cube", generate_prism(4))
    with pytest.raises(DomainError):
        area_at(s, 0.0)
    with pytest.raises(DomainError):
        area_at(s, s.max_side * 1.01)


def test_cube_tiles():
    s = SolidRecord.from_tessellation("cube", generate_prism(4))
    a, argmin = graph_a_c(s)
    assert a == pytest.approx(math.acos(1 / 3), abs=1e-12)
    assert argmin == [(4, 4, 4)]
    v = is_spherical_tiling(s)
    assert v and v.witness[0].certificate == "argmin"
    assert area_at(s, a) == pytest.approx(FOUR_PI, abs=1e-10)


def test_pyramid_five_does_not_tile():
    s = SolidRecord.from_tessellation("J2", generate_pyramid(5))
    v = is_spherical_tiling(s)
    assert not v
    boundary = [w for w in v.witness if w.certificate == "boundary"]
    assert [w.pattern for w in boundary] == [(3, 3, 5)]
    assert boundary[0].own_defect > 0


def test_prism_verdict_needs_no_slack():
    # a single vertex pattern is its own argmin, so tol_eq never matters
    s = SolidRecord.from_tessellation("p", generate_prism(7))
    assert is_spherical_tiling(s, tol_eq=1e-15)
