import cmath
import math
from dataclasses import replace
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import packed
from pentatile.geometry import (
    LAMBDA_EXACT,
    LAMBDA_MODULUS,
    PENTAGON_APOTHEM,
    band_census,
    chart_edge_transition,
    chart_image_radius,
    chart_vertex,
    congruence_distance,
    diameter_stats,
    estimate_lambda,
    extract_tiles,
    hausdorff_distance,
    predicted_angle,
    skeleton_nesting_error,
    stats_report,
    tile_corner_angles,
)

points = st.lists(
    st.tuples(st.floats(-10, 10), st.floats(-10, 10)), min_size=1, max_size=30
).map(lambda xs: np.array([complex(x, y) for x, y in xs]))


def brute_hausdorff(a, b):
    d = np.abs(a[:, None] - b[None, :])
    return max(d.min(axis=1).max(), d.min(axis=0).max())


def rigid(t, angle, shift, scale=1.0, reflect=False):
    def f(z):
        z = z.conjugate() if reflect else z
        return scale * z * cmath.exp(1j * angle) + shift
    return replace(t, corners=f(t.corners), polyline=f(t.polyline), diameter=scale * t.diameter)


def segments_cross(p, q, r, s):
    def orient(a, b, c):
        return ((b - a).conjugate() * (c - a)).imag
    return (orient(p, q, r) * orient(p, q, s) < 0) and (orient(r, s, p) * orient(r, s, q) < 0)


@pytest.fixture(scope="module")
def k3_tiles():
    return extract_tiles(packed(3, 1), 2)


# charts


def test_predicted_angles_exact():
    for d in (3, 4):
        assert Fraction(3, 5) * Fraction(10, 3 * d) == Fraction(2, d)
        assert math.isclose(predicted_angle(d), 2 * math.pi / d, rel_tol=1e-15)


@pytest.mark.parametrize("d", [3, 4])
@given(r=st.floats(1e-6, 1 / 3 - 1e-9))
def test_chart_seam_identity(d, r):
    seam = chart_vertex(r, 3 * math.pi * d / 5, d)
    assert abs(seam - chart_vertex(r, 0.0, d)) < 1e-12


def test_chart_image_radii():
    assert round(chart_image_radius(3), 3) == 0.295
    assert round(chart_image_radius(4), 3) == 0.400
    assert chart_vertex(0.0, 0.0, 3) == 0
    assert math.isclose(abs(chart_vertex(1 / 3 - 1e-15, 1.0, 4)), chart_image_radius(4), rel_tol=1e-9)


def test_chart_domain_errors():
    with pytest.raises(ValueError):
        chart_vertex(0.5, 0.0, 3)
    with pytest.raises(ValueError):
        chart_vertex(0.1, 0.0, 5)
    with pytest.raises(ValueError):
        chart_vertex(0.1, 3 * math.pi * 3 / 5 + 0.1, 3)
    with pytest.raises(ValueError):
        chart_edge_transition(0j, 5)


@given(st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False),
       st.booleans(), st.booleans())
def test_edge_transition_rotation(z, flip, upper):
    assert abs(chart_edge_transition(z, 0) - z) < 1e-12
    w = z
    for _ in range(5):
        w = chart_edge_transition(w, 1, upper=upper)
    assert abs(w - z) < 1e-12
    z0 = (1j if upper else -1j) * PENTAGON_APOTHEM
    for m in range(5):
        assert abs(chart_edge_transition(z0, m, upper=upper) - z0) < 1e-12
    if flip:
        assert abs(chart_edge_transition(z, 0, orientation_flip=True) + z) < 1e-12


def test_edge_transition_maps_pentagon_to_itself():
    # unit-side regular pentagon with its base edge on [-1/2, 1/2]
    z0 = 1j * PENTAGON_APOTHEM
    verts = [z0 + (0.5 - z0) * cmath.exp(2j * math.pi * k / 5) for k in range(5)]
    for m in range(5):
        image = [chart_edge_transition(v, m) for v in verts]
        for w in image:
            assert min(abs(w - v) for v in verts) < 1e-12


# hausdorff and congruence


def test_hausdorff_examples():
    s = np.array([0, 1, 1j])
    assert hausdorff_distance(s, s) == 0
    assert hausdorff_distance([0, 1], [0.5]) == 0.5
    assert hausdorff_distance(np.array([[0, 0], [1, 0]]), np.array([[0.5, 0]])) == 0.5
    with pytest.raises(ValueError):
        hausdorff_distance([], [1])


@given(points, points)
def test_hausdorff_matches_brute_force(a, b):
    h = hausdorff_distance(a, b)
    assert h == pytest.approx(brute_hausdorff(a, b), abs=1e-12)
    assert h == hausdorff_distance(b, a)


def test_congruence_isometry_invariance(k3_tiles):
    t = k3_tiles[7]
    assert congruence_distance(t, t) < 1e-12
    for angle, shift, reflect in [(0.3, 2 + 1j, False), (2.1, -5j, True), (math.pi, 0, False)]:
        u = rigid(t, angle, shift, reflect=reflect)
        assert congruence_distance(t, u) < 1e-9
        assert congruence_distance(u, t) < 1e-9


def test_congruence_detects_scaling(k3_tiles):
    t = k3_tiles[0]
    assert congruence_distance(t, rigid(t, 0.0, 0, scale=1.3)) > 0.05


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_congruence_pseudometric(k3_tiles, data):
    idx = st.integers(0, len(k3_tiles) - 1)
    a, b, c = (k3_tiles[data.draw(idx)] for _ in range(3))
    ab, bc, ac = congruence_distance(a, b), congruence_distance(b, c), congruence_distance(a, c)
    assert ab >= 0
    assert abs(ab - congruence_distance(b, a)) < 1e-9
    # normalization by the pair's mean diameter, so compare unnormalized lengths
    da, db, dc = a.diameter, b.diameter, c.diameter
    assert ac * (da + dc) / 2 <= ab * (da + db) / 2 + bc * (db + dc) / 2 + 1e-6


# tiles


def test_extract_tiles_counts():
    assert len(extract_tiles(packed(0, 0), 0)) == 1
    assert len(extract_tiles(packed(0, 0), 0)[0].corners) == 5
    p = packed(2, 1)
    depth = p.tri.origin.face_depths
    assert len(extract_tiles(p, 1)) == sum(d >= 1 for d in depth)
    with pytest.raises(ValueError):
        extract_tiles(packed(1, 0), 5)


@pytest.mark.parametrize("m", [0, 1, 2])
def test_tile_shape_invariants(m):
    for t in extract_tiles(packed(2, m), 1):
        assert t.samples_per_edge == 2 ** m + 1
        assert len(t.polyline) == 5 * 2 ** m
        for i in range(5):
            assert t.polyline[t.corner_index(i)] == t.corners[i]
        assert t.diameter > 0
        ring = t.polyline
        n = len(ring)
        segs = [(ring[i], ring[(i + 1) % n]) for i in range(n)]
        for i in range(n):
            for j in range(i + 2, n):
                if i == 0 and j == n - 1:
                    continue
                assert not segments_cross(*segs[i], *segs[j])


def test_central_angle_error_decreases_with_refinement():
    errs = []
    for m in range(4):
        p = packed(2, m)
        central = next(t for t in extract_tiles(p, 1) if t.face == p.tri.origin.center_face)
        errs.append(np.abs(tile_corner_angles(central) - 2 * math.pi / 3).max())
    assert all(a > b for a, b in zip(errs, errs[1:]))
    assert errs[3] < 0.15


def test_k3_central_angle_improves():
    def err(m):
        p = packed(3, m)
        t = next(t for t in extract_tiles(p, 2) if t.face == p.tri.origin.center_face)
        return np.abs(tile_corner_angles(t) - 2 * math.pi / 3).max()
    assert err(3) < err(1)


def test_angles_by_class_at_fine_refinement():
    tiles = extract_tiles(packed(3, 3), 2)
    by_class = {}
    for t in tiles:
        ang = tile_corner_angles(t)
        for d, a in zip(t.corner_degrees, ang):
            by_class.setdefault(t.degree_word, []).append(abs(a - predicted_angle(d)))
    assert set(by_class) == {"33333", "33434", "33444"}
    for word, errs in by_class.items():
        assert max(errs) < 0.15, word


def test_angle_of_degenerate_edge():
    t = extract_tiles(packed(1, 1), 0)[0]
    bad = t.polyline.copy()
    bad[1] = bad[0]
    with pytest.raises(ValueError):
        tile_corner_angles(replace(t, polyline=bad))


# lambda and nesting


def test_lambda_constants():
    assert math.isclose(abs(LAMBDA_EXACT), LAMBDA_MODULUS)
    assert math.isclose(LAMBDA_MODULUS, 3.177672, rel_tol=1e-6)
    assert math.isclose(cmath.phase(LAMBDA_EXACT), math.pi / 5)
    assert abs(LAMBDA_EXACT ** 5 + 324) < 1e-9


def test_lambda_estimate_at_n3_m2():
    lam = estimate_lambda(packed(3, 2))
    assert abs(lam.modulus - LAMBDA_MODULUS) / LAMBDA_MODULUS < 0.05
    assert abs(abs(math.degrees(lam.argument)) - 36) < 3
    assert lam.modulus > 1 and lam.fit_residual >= 0
    assert lam.sample_size == 10
    coarse = estimate_lambda(packed(2, 0))
    assert coarse.sample_size == 5
    assert abs(lam.modulus - LAMBDA_MODULUS) < abs(coarse.modulus - LAMBDA_MODULUS)


def test_lambda_residual_decreases_with_refinement():
    res = [estimate_lambda(packed(3, m)).fit_residual for m in (1, 2, 3)]
    assert res[0] > res[1] > res[2]


def test_lambda_needs_level_two():
    with pytest.raises(ValueError):
        estimate_lambda(packed(1, 1))


def test_lambda_is_normalization_invariant():
    p = packed(2, 1)
    # any rotation and scaling about the central tile's centroid
    q = replace(p, centers=p.centers * (0.3 - 2j))
    assert abs(estimate_lambda(q).value - estimate_lambda(p).value) < 1e-9


def test_skeleton_nesting():
    e1 = skeleton_nesting_error(packed(2, 1))
    e2 = skeleton_nesting_error(packed(3, 2))
    assert 0 <= e2 < e1
    # the exact constant does about as well as the fitted one
    exact = replace(estimate_lambda(packed(3, 2)), value=LAMBDA_EXACT)
    assert skeleton_nesting_error(packed(3, 2), exact) < 0.05


# census and diameters


def test_band_census_basics(k3_tiles):
    empty = band_census([], 1.0)
    assert (empty.count, empty.classes, empty.witnesses) == (0, 0, ())
    b = band_census(k3_tiles, 1.0, 2.0)
    assert 0 < b.classes <= b.count
    faces = {t.face: t for t in k3_tiles}
    assert all(1.0 - 1e-9 <= faces[f].diameter <= 2.0 + 1e-9 for f in b.witnesses)
    for i, f in enumerate(b.witnesses):
        for g in b.witnesses[:i]:
            assert congruence_distance(faces[g], faces[f]) > b.eps
    with pytest.raises(ValueError):
        band_census(k3_tiles, 1.0, 1.0)


def test_band_census_fuses_congruent_copies(k3_tiles):
    t = k3_tiles[3]
    copies = [replace(rigid(t, 0.7 * k, 3 * k), face=1000 + k) for k in range(4)]
    b = band_census(copies, t.diameter, 1.01)
    assert (b.count, b.classes) == (4, 1)


def test_ten_fold_symmetry_of_tiles(k3_tiles):
    # D5 orbits: every tile has a congruent partner, except tiles on a mirror axis
    central = next(t for t in k3_tiles if t.face == packed(3, 1).tri.origin.center_face)
    spun = rigid(central, 2 * math.pi / 5, 0)
    assert congruence_distance(central, spun) < 1e-9


def test_central_tile_is_smallest():
    for n in (3, 4):
        p = packed(n, 1)
        tiles = extract_tiles(p, 2)
        central = next(t for t in tiles if t.face == p.tri.origin.center_face)
        assert abs(central.diameter - 1.0) < 1e-12
        assert min(t.diameter for t in tiles) == pytest.approx(1.0)


def test_small_tile_gap_measured():
    # diameter ratio of the next-smallest tiles over the central one
    gaps = []
    for n in (3, 4):
        d = sorted(t.diameter for t in extract_tiles(packed(n, 1), 2))
        gaps.append(d[1])
    assert gaps[0] == pytest.approx(1.3367, abs=2e-3)
    assert gaps[1] == pytest.approx(1.3216, abs=2e-3)


def test_diameter_stats():
    tiles = extract_tiles(packed(2, 1), 2)
    s = diameter_stats(tiles)
    assert s["min"] > 0 and s["count"] == len(tiles)
    assert sum(s["histogram"]["counts"]) == len(tiles)
    one = diameter_stats(tiles[:1])
    assert one["min"] == one["max"]
    with pytest.raises(ValueError):
        diameter_stats([])


def test_stats_report_shape():
    rep = stats_report(packed(2, 0))
    assert {"lambda", "angles", "diameters", "band", "skeleton_nesting_error"} <= set(rep)
    assert set(rep["lambda"]) == {"modulus", "argument_deg", "residual"}
    assert set(rep["band"]) >= {"D", "ratio", "count", "classes", "witnesses"}
    assert rep["band"]["classes"] <= rep["band"]["count"]
    full = stats_report(packed(3, 1))
    assert set(full["angles"]) == {"33333", "33434", "33444"}


@pytest.mark.slow
def test_band_growth_just_above_the_small_tile_gap():
    # the band only starts filling once its ratio clears the 1.31-1.34 gap
    counts = []
    for n in (3, 4, 5):
        tiles = extract_tiles(packed(n, 1), 2)
        counts.append(band_census(tiles, 1.0, 1.35).count)
    assert counts[0] < counts[1] < counts[2]
