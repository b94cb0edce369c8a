import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import flower, packed
from pentatile.circlepack import (
    CENTER,
    CORNER,
    MIDPOINT,
    Packing,
    PackingError,
    TriComplex,
    _angle_jacobian,
    angle_sums,
    corner_angles,
    hex_refine,
    layout,
    normalize,
    pack_complex,
    refined_triangulation,
    solve_radii,
    star_triangulate,
    tile_polyline,
)
from pentatile.complex import build_k0
from pentatile.subdivision import build_kn


def law_of_cosines(faces, radii):
    r = radii[faces]
    out = np.empty_like(r)
    for i in range(3):
        a, b, c = r[:, i], r[:, (i + 1) % 3], r[:, (i + 2) % 3]
        cos = ((a + b) ** 2 + (a + c) ** 2 - (b + c) ** 2) / (2 * (a + b) * (a + c))
        out[:, i] = np.arccos(cos)
    return out


def counts(t):
    return t.n_vertices, t.n_edges, t.n_faces


def test_star_triangulation_counts():
    assert counts(star_triangulate(build_k0())) == (6, 10, 5)
    t1 = star_triangulate(build_kn(1))
    assert counts(t1) == (21, 50, 30)
    assert t1.euler_characteristic() == 1
    centers = set(t1.face_centers)
    for tri in t1.faces:
        assert sum(v in centers for v in tri) == 1
    assert (t1.kinds[list(centers)] == CENTER).all()


def test_hex_refine_counts():
    t = star_triangulate(build_k0())
    r1 = hex_refine(t)
    assert counts(r1) == (16, 35, 20)
    assert r1.refinement_level == 1
    r2 = hex_refine(r1)
    assert r2.n_faces == 80
    for a, b in zip([t, r1], [r1, r2]):
        V, E, F = counts(a)
        assert counts(b) == (V + E, 2 * E + 3 * F, 4 * F)
        assert b.euler_characteristic() == 1
    assert (r2.kinds == MIDPOINT).sum() == r2.n_vertices - 6
    # kinds partition the vertices
    assert set(np.unique(r2.kinds)) <= {CORNER, CENTER, MIDPOINT}


def test_triangles_are_oriented_consistently():
    t = refined_triangulation(2, 1)
    directed = set()
    for a, b, c in t.faces.tolist():
        for e in ((a, b), (b, c), (c, a)):
            assert e not in directed
            directed.add(e)


def test_chains_follow_refinement():
    t = refined_triangulation(1, 2)
    for (u, v), ch in t.chains.items():
        assert len(ch) == 2 ** 2 + 1
        assert ch[0] == u and ch[-1] == v


def test_half_angle_form_equals_law_of_cosines():
    rng = np.random.default_rng(7)
    faces = np.arange(300).reshape(100, 3)
    radii = rng.uniform(0.01, 10.0, 300)
    assert np.allclose(corner_angles(faces, radii), law_of_cosines(faces, radii), atol=1e-12)
    assert np.allclose(corner_angles(faces, radii).sum(axis=1), math.pi)


@pytest.mark.parametrize("k", range(3, 9))
@pytest.mark.parametrize("method", ["newton", "sweep"])
def test_flower_closed_form(k, method):
    p = solve_radii(flower(k), 1.0, tol=1e-13, method=method)
    assert abs(p.radii[0] - (1 / math.sin(math.pi / k) - 1)) < 1e-8
    assert p.angle_residual <= 1e-13


def test_six_flower_layout():
    p = solve_radii(flower(6), 1.0)
    assert abs(p.radii[0] - 1.0) < 1e-12
    q = layout(flower(6), p.radii, seed=0)
    d = q.centers[1:] - q.centers[0]
    assert np.allclose(np.abs(d), 2.0)
    ang = np.sort(np.mod(np.degrees(np.angle(d)), 360.0))
    assert np.allclose(ang, np.arange(0, 360, 60), atol=1e-9)


def test_layout_seed_convention():
    t = refined_triangulation(1, 0)
    p = solve_radii(t)
    q = layout(t, p.radii, seed=3)
    a, b, _ = t.faces[3]
    assert q.centers[a] == 0
    assert q.centers[b].imag == 0 and q.centers[b].real > 0


def test_jacobian_matches_finite_differences():
    t = refined_triangulation(1, 1)
    rng = np.random.default_rng(3)
    radii = rng.uniform(0.5, 2.0, t.n_vertices)
    jac = -_angle_jacobian(t, radii).toarray()
    h = 1e-6
    for j in rng.choice(t.n_vertices, 8, replace=False):
        up, dn = radii.copy(), radii.copy()
        up[j] *= math.exp(h)
        dn[j] *= math.exp(-h)
        fd = (angle_sums(t, up) - angle_sums(t, dn)) / (2 * h)
        assert np.allclose(jac[:, j], fd, atol=1e-7)


def test_newton_and_sweep_agree():
    t = refined_triangulation(2, 0)
    a = solve_radii(t, tol=1e-11, method="newton")
    b = solve_radii(t, tol=1e-11, method="sweep")
    assert np.allclose(a.radii, b.radii, rtol=1e-8)


def test_residual_history_monotone():
    t = refined_triangulation(2, 1)
    newton = solve_radii(t, method="newton")
    assert (np.diff(newton.history) < 0).all()
    assert newton.history[-1] <= 1e-10
    sweep = solve_radii(t, method="sweep")
    assert (np.diff(sweep.total_history) <= 0).all()
    assert sweep.history[-1] <= 1e-10


def test_non_convergence_reports_residual():
    with pytest.raises(PackingError) as exc:
        solve_radii(refined_triangulation(2, 1), max_iters=1)
    assert exc.value.residual > 1e-10


@settings(max_examples=10, deadline=None)
@given(st.floats(0.05, 20.0))
def test_boundary_radius_scales_linearly(r0):
    t = refined_triangulation(1, 1)
    base = solve_radii(t, 1.0, tol=1e-12)
    p = solve_radii(t, r0, tol=1e-12)
    assert np.allclose(p.radii, r0 * base.radii, rtol=1e-9)


@pytest.mark.parametrize("n,m", [(0, 0), (1, 0), (2, 1), (3, 1)])
def test_packing_tangency_and_orientation(n, m):
    p = packed(n, m)
    assert p.angle_residual <= 1e-10
    assert p.tangency_residual <= 1e-6
    assert (p.radii > 0).all()
    z = p.centers
    f = p.tri.faces
    area = ((z[f[:, 1]] - z[f[:, 0]]).conjugate() * (z[f[:, 2]] - z[f[:, 0]])).imag
    assert (area > 0).all()
    e = p.tri.edges
    rs = p.radii[e[:, 0]] + p.radii[e[:, 1]]
    assert np.max(np.abs(np.abs(z[e[:, 0]] - z[e[:, 1]]) - rs) / rs) <= 1e-6


def test_face_counts():
    assert packed(0, 0).tri.n_faces == 5
    assert packed(2, 1).tri.n_faces == 720


def test_normalize_conventions():
    p = packed(2, 1)
    face = p.tri.origin.faces[p.tri.origin.center_face]
    corners = p.centers[list(face)]
    assert abs(corners.mean()) < 1e-12
    assert abs(np.angle(corners[0])) < 1e-12
    ring = p.centers[tile_polyline(p.tri, face)]
    assert abs(np.abs(ring[:, None] - ring[None, :]).max() - 1.0) < 1e-12
    q = normalize(p)
    assert np.allclose(q.centers, p.centers, atol=1e-13)
    assert np.allclose(q.radii, p.radii, rtol=1e-13)


def test_k0_central_tile_is_nearly_regular():
    p = packed(0, 0)
    corners = p.centers[:5]
    sides = np.abs(np.roll(corners, -1) - corners)
    assert np.ptp(sides) < 1e-9  # D5-symmetric at this level


def test_determinism_and_round_trip():
    a = pack_complex(2, 1)
    b = pack_complex(2, 1)
    assert a.to_json() == b.to_json()
    back = Packing.from_json(a.to_json())
    assert back.to_json() == a.to_json()
    assert np.array_equal(back.centers, a.centers)


def test_packing_json_schema():
    doc = json.loads(packed(1, 0).to_json())
    assert set(doc) == {"level", "refine", "radii", "centers", "angle_residual", "tangency_residual"}
    assert doc["level"] == 1 and doc["refine"] == 0
    assert all(len(xy) == 2 for xy in doc["centers"])


def test_bad_inputs():
    with pytest.raises(ValueError):
        solve_radii(flower(5), boundary_radius=0.0)
    with pytest.raises(ValueError):
        solve_radii(flower(5), method="magic")
    with pytest.raises(ValueError):
        # closed tetrahedron surface, Euler characteristic 2
        tet = np.array([[0, 1, 2], [0, 2, 3], [0, 3, 1], [1, 3, 2]])
        TriComplex(tet, np.zeros(4, int), np.zeros(4, int), {})
    with pytest.raises(ValueError):
        pack_complex(-1, 0)
