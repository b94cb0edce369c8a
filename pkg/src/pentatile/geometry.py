"""Tile shapes read off a packing, and the measurements taken on them."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .circlepack import Packing, tile_polyline
from .complex import PentagonComplex
from .subdivision import canonical_word

LAMBDA_EXACT = (-324 + 0j) ** (1 / 5)  # principal root: 18**(2/5) * exp(i*pi/5)
LAMBDA_MODULUS = 18 ** 0.4

# barycenter of the unit-side regular pentagon sitting on [-1/2, 1/2]
PENTAGON_APOTHEM = 0.5 / math.tan(math.pi / 5)


@dataclass(frozen=True, eq=False)
class TileShape:
    face: int
    corners: np.ndarray  # (5,) complex
    polyline: np.ndarray  # (5 * 2**m,) complex, closed implicitly, starts at corner 0
    degree_word: str | None
    diameter: float
    samples_per_edge: int  # 2**m + 1, endpoints included
    corner_degrees: tuple[int, ...] = ()

    def corner_index(self, i: int) -> int:
        return i * (self.samples_per_edge - 1)


def _diameter(points: np.ndarray) -> float:
    d = points[:, None] - points[None, :]
    return float(np.abs(d).max())


def extract_tiles(p: Packing, interior_margin: int = 2) -> list[TileShape]:
    """One shape per pentagon face at depth >= ``interior_margin``."""
    if p.centers is None:
        raise ValueError("packing has no layout")
    c: PentagonComplex = p.tri.origin
    depth = c.face_depths
    seg = 2 ** p.tri.refinement_level
    tiles = []
    for f, face in enumerate(c.faces):
        if depth[f] < interior_margin:
            continue
        ring = p.centers[tile_polyline(p.tri, face)]
        word = canonical_word(c.degrees[v] for v in face) if depth[f] >= 1 else None
        degs = tuple(c.degrees[v] for v in face)
        tiles.append(
            TileShape(f, p.centers[list(face)], ring, word, _diameter(ring), seg + 1, degs)
        )
    if not tiles:
        raise ValueError(f"margin {interior_margin} leaves no tiles")
    return tiles


def tile_corner_angles(t: TileShape) -> np.ndarray:
    """Interior angle at each corner from its two nearest polyline samples."""
    ring = t.polyline
    n = len(ring)
    out = np.empty(5)
    for i in range(5):
        k = t.corner_index(i)
        here, prev, nxt = ring[k], ring[k - 1], ring[(k + 1) % n]
        a, b = prev - here, nxt - here
        if a == 0 or b == 0:
            raise ValueError(f"degenerate edge segment at corner {i} of face {t.face}")
        out[i] = cmath.phase(a / b) % (2 * math.pi)
    return out


def predicted_angle(d: int) -> float:
    """Corner angle at a degree-``d`` vertex once the cone is flattened."""
    return (3 * math.pi / 5) * (10 / (3 * d))


# charts ------------------------------------------------------------------------


def chart_vertex(r: float, theta: float, d: int) -> complex:
    """Flatten the cone around a degree-``d`` vertex: ``w = z**(10/(3d))``.

    The point is given in polar form because the cone angle ``3*pi*d/5`` may
    exceed ``2*pi``.
    """
    if d not in (3, 4):
        raise ValueError("vertex degree must be 3 or 4")
    if not (0 <= r < 1 / 3 and 0 <= theta <= 3 * math.pi * d / 5 + 1e-15):
        raise ValueError("point outside the vertex chart domain")
    e = 10 / (3 * d)
    return r**e * cmath.exp(1j * theta * e)


def chart_image_radius(d: int) -> float:
    return (1 / 3) ** (10 / (3 * d))


def chart_edge_transition(
    z: complex, m: int, orientation_flip: bool = False, upper: bool = True,
    center: complex | None = None,
) -> complex:
    """Change of edge chart inside one pentagon: rotate by ``2*pi*m/5``
    about the pentagon's barycenter, after ``z -> -z`` if the edges are
    oppositely oriented."""
    if m not in range(5):
        raise ValueError("rotation count must be in 0..4")
    if center is None:
        center = (1j if upper else -1j) * PENTAGON_APOTHEM
    if orientation_flip:
        z = -z
    return (z - center) * cmath.exp(2j * math.pi * m / 5) + center


# lambda ------------------------------------------------------------------------


@dataclass(frozen=True)
class LambdaEstimate:
    value: complex
    fit_residual: float
    sample_size: int

    @property
    def modulus(self) -> float:
        return abs(self.value)

    @property
    def argument(self) -> float:
        return cmath.phase(self.value)

    def to_dict(self) -> dict:
        return {
            "modulus": self.modulus,
            "argument_deg": math.degrees(self.argument),
            "residual": self.fit_residual,
        }


def _central_pairs(p: Packing) -> tuple[np.ndarray, np.ndarray]:
    """Matched points on the central tile and on its parent supertile.

    Corner ``c_i`` of the central child corresponds to parent corner
    ``v_{i+1}``; with refinement the tile's edge midpoints are matched to the
    parent's edge midpoints as well.
    """
    c = p.tri.origin
    if c.ancestry is None:
        raise ValueError("packing's complex has no subdivision ancestry")
    if c.level < 2:
        raise ValueError("need level >= 2 so that the parent supertile is interior")
    cf = c.center_face
    parent, slot = c.ancestry[cf]
    if slot != 5:
        raise ValueError("center face is not a central child")
    # parent corners keep their ids in the child complex; outer child j holds
    # parent corner j at position 1 and the edge midpoints at positions 0, 2
    kids = [c.faces[6 * parent + j] for j in range(5)]
    pcorners = [k[1] for k in kids]
    pmids = [k[2] for k in kids]  # midpoint of parent edge (v_j, v_j+1)
    inner = c.faces[cf]
    p_pts = [p.centers[inner[i]] for i in range(5)]
    q_pts = [p.centers[pcorners[(i + 1) % 5]] for i in range(5)]
    if p.tri.refinement_level >= 1:
        ring = p.centers[tile_polyline(p.tri, inner)]
        half = 2 ** (p.tri.refinement_level - 1)
        step = 2 * half
        for i in range(5):
            p_pts.append(ring[i * step + half])
            q_pts.append(p.centers[pmids[(i + 1) % 5]])
    return np.array(p_pts), np.array(q_pts)


def estimate_lambda(p: Packing) -> LambdaEstimate:
    """Least-squares complex scalar taking the central tile onto its supertile.

    The residual is the root-mean-square misfit in the packing's length units.
    """
    pts, qts = _central_pairs(p)
    a = complex(np.vdot(pts, qts) / np.vdot(pts, pts))
    rms = float(np.sqrt(np.mean(np.abs(a * pts - qts) ** 2)))
    return LambdaEstimate(a, rms, len(pts))


def _segments(p: Packing) -> tuple[np.ndarray, np.ndarray]:
    starts, ends = [], []
    for chain in p.tri.chains.values():
        z = p.centers[list(chain)]
        starts.append(z[:-1])
        ends.append(z[1:])
    return np.concatenate(starts), np.concatenate(ends)


def distance_to_segments(points: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Distance from each point to the nearest of the segments ``a[k]b[k]``."""
    d = b - a
    l2 = np.abs(d) ** 2
    rel = points[:, None] - a[None, :]
    t = np.clip((rel * d.conjugate()[None, :]).real / np.where(l2 > 0, l2, 1.0), 0.0, 1.0)
    return np.abs(rel - t * d[None, :]).min(axis=1)


def skeleton_nesting_error(
    p: Packing, lam: LambdaEstimate | None = None, per_segment: int = 16
) -> float:
    """How far the dilated central tile boundary strays from the 1-skeleton.

    Maximum distance from points sampled along ``lam * boundary(central
    tile)`` to the union of all refined pentagon edges, over the central tile
    diameter.
    """
    lam = estimate_lambda(p) if lam is None else lam
    c = p.tri.origin
    ring = p.centers[tile_polyline(p.tri, c.faces[c.center_face])]
    a, b = _segments(p)
    # polyline vertices alone sit on symmetry axes that carry skeleton edges
    dist = distance_to_segments(lam.value * densify(ring, per_segment), a, b)
    return float(dist.max() / _diameter(ring))


# shape comparison ----------------------------------------------------------------


def hausdorff_distance(a, b) -> float:
    """Symmetric Hausdorff distance between two finite planar point sets.

    Points may be complex numbers or ``(x, y)`` rows.
    """
    pa, pb = _as_xy(a), _as_xy(b)
    if len(pa) == 0 or len(pb) == 0:
        raise ValueError("Hausdorff distance of an empty set")
    dab = cKDTree(pb).query(pa)[0].max()
    dba = cKDTree(pa).query(pb)[0].max()
    return float(max(dab, dba))


def _as_xy(a) -> np.ndarray:
    arr = np.asarray(a)
    if np.iscomplexobj(arr) or arr.ndim == 1:
        arr = arr.astype(complex).ravel()
        return np.column_stack([arr.real, arr.imag])
    return arr.reshape(-1, 2).astype(float)


def densify(ring: np.ndarray, per_segment: int = 8) -> np.ndarray:
    """Closed polyline resampled with ``per_segment`` points per segment."""
    nxt = np.roll(ring, -1)
    s = np.arange(per_segment) / per_segment
    return (ring[:, None] + s[None, :] * (nxt - ring)[:, None]).ravel()


def congruence_distance(t1: TileShape, t2: TileShape, per_segment: int = 8) -> float:
    """Smallest Hausdorff distance between ``t1`` and an isometric image of
    ``t2``, over the mean diameter.

    Each of the 10 corner correspondences (5 shifts, with or without
    reflection) fixes the alignment: corner centroids are matched and the
    rotation is the least-squares fit of the corners.  No scaling.
    """
    a_ring = densify(t1.polyline, per_segment)
    a_cent = t1.corners.mean()
    a_c = t1.corners - a_cent
    a_pts = a_ring - a_cent
    tree_a = cKDTree(np.column_stack([a_pts.real, a_pts.imag]))
    best = math.inf
    for reflect in (False, True):
        corners = t2.corners.conjugate() if reflect else t2.corners
        ring = t2.polyline.conjugate() if reflect else t2.polyline
        if reflect:
            corners = corners[::-1]
        b_cent = corners.mean()
        b_c = corners - b_cent
        b_ring = densify(ring, per_segment) - b_cent
        for k in range(5):
            bk = np.roll(b_c, -k)
            w = np.vdot(bk, a_c)
            rot = w / abs(w) if w != 0 else 1.0
            pts = b_ring * rot
            xy = np.column_stack([pts.real, pts.imag])
            d1 = tree_a.query(xy)[0].max()
            if d1 >= best * 0.5 * (t1.diameter + t2.diameter):
                continue
            d2 = cKDTree(xy).query(tree_a.data)[0].max()
            best = min(best, max(d1, d2) / (0.5 * (t1.diameter + t2.diameter)))
    return float(best)


@dataclass(frozen=True)
class BandCensus:
    low: float
    high: float
    ratio: float
    count: int
    classes: int
    witnesses: tuple[int, ...]
    eps: float

    def to_dict(self) -> dict:
        return {
            "D": self.low,
            "ratio": self.ratio,
            "count": self.count,
            "classes": self.classes,
            "witnesses": list(self.witnesses),
            "eps": self.eps,
        }


def band_census(
    tiles: list[TileShape], D: float, ratio: float = 1.3, eps: float = 0.02
) -> BandCensus:
    """Tiles with diameter in ``[D, ratio*D]``, clustered up to isometry.

    Greedy in increasing diameter: a tile joins the first class whose
    representative is within ``eps``, otherwise it founds a new class.
    """
    if D <= 0 or ratio <= 1:
        raise ValueError("need D > 0 and ratio > 1")
    lo, hi = D * (1 - 1e-9), ratio * D * (1 + 1e-9)
    band = sorted((t for t in tiles if lo <= t.diameter <= hi), key=lambda t: (t.diameter, t.face))
    reps: list[TileShape] = []
    for t in band:
        for r in reps:
            # Hausdorff distance >= half the diameter gap, so this pair is out of reach
            if abs(t.diameter - r.diameter) > eps * (t.diameter + r.diameter):
                continue
            if congruence_distance(r, t) <= eps:
                break
        else:
            reps.append(t)
    return BandCensus(D, ratio * D, ratio, len(band), len(reps), tuple(r.face for r in reps), eps)


def diameter_stats(tiles: list[TileShape], bins: int = 10) -> dict:
    if not tiles:
        raise ValueError("no tiles")
    d = np.array([t.diameter for t in tiles])
    counts, edges = np.histogram(d, bins=bins)
    return {
        "min": float(d.min()),
        "max": float(d.max()),
        "count": len(d),
        "histogram": {"counts": counts.tolist(), "edges": edges.tolist()},
    }


def angle_stats(tiles: list[TileShape]) -> dict:
    """Measured corner angles grouped by prototile class and corner degree."""
    out: dict[str, dict] = {}
    for t in tiles:
        if t.degree_word is None:
            continue
        ang = tile_corner_angles(t)
        entry = out.setdefault(t.degree_word, {"tiles": 0, "3": [], "4": []})
        entry["tiles"] += 1
        for d, a in zip(t.corner_degrees, ang):
            entry[str(d)].append(a)
    report = {}
    for word, entry in sorted(out.items()):
        row = {"tiles": entry["tiles"]}
        for d in ("3", "4"):
            vals = np.array(entry[d])
            if len(vals):
                target = predicted_angle(int(d))
                row[f"degree{d}"] = {
                    "expected": target,
                    "mean": float(vals.mean()),
                    "max_error": float(np.abs(vals - target).max()),
                }
        report[word] = row
    return report


def stats_report(
    p: Packing, margin: int = 2, D: float | None = None, ratio: float = 1.3, eps: float = 0.02
) -> dict:
    """Everything ``cmd_stats`` writes: lambda, angles, diameters, band census."""
    tiles = extract_tiles(p, margin)
    c = p.tri.origin
    central = next((t for t in tiles if t.face == c.center_face), None)
    if central is None:
        central = next(t for t in extract_tiles(p, 0) if t.face == c.center_face)
    D = central.diameter if D is None else D
    report: dict = {"level": p.level, "refine": p.refine, "margin": margin}
    if c.level >= 2:
        lam = estimate_lambda(p)
        report["lambda"] = lam.to_dict()
        report["skeleton_nesting_error"] = skeleton_nesting_error(p, lam)
    else:
        report["lambda"] = None
        report["skeleton_nesting_error"] = None
    report["angles"] = angle_stats(tiles)
    report["central_angles"] = tile_corner_angles(central).tolist()
    report["diameters"] = diameter_stats(tiles)
    report["band"] = band_census(tiles, D, ratio, eps).to_dict()
    return report
