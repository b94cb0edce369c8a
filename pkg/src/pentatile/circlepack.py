"""Euclidean circle packings of refined pentagonal complexes.

The pentagon complex is star-triangulated (one center per pentagon), then
hexagonally refined ``m`` times; radii are solved so that every interior
flower closes up, and centers are laid out breadth-first.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .complex import PentagonComplex
from .subdivision import build_kn

CORNER, CENTER, MIDPOINT = 0, 1, 2
TWO_PI = 2.0 * math.pi


class PackingError(RuntimeError):
    """Radii or layout failed to meet tolerance; ``residual`` says by how much."""

    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


@dataclass(frozen=True, eq=False)
class TriComplex:
    """Triangulated disk with vertex kinds.

    Vertices ``0..V_pent-1`` are the pentagon corners, followed by one center
    per pentagon face, followed by refinement midpoints.  ``chains`` maps a
    pentagon edge ``(u, v)`` with ``u < v`` to the vertices along it from
    ``u`` to ``v``.
    """

    faces: np.ndarray  # (F, 3) int, counterclockwise
    kinds: np.ndarray  # CORNER / CENTER / MIDPOINT
    midpoint_level: np.ndarray  # refinement step that created a midpoint, else 0
    chains: dict[tuple[int, int], tuple[int, ...]]
    origin: PentagonComplex | None = None
    refinement_level: int = 0
    face_centers: tuple[int, ...] = ()  # pentagon face -> its center vertex
    _check: bool = field(default=True, repr=False)

    def __post_init__(self) -> None:
        if self._check:
            if self.faces.ndim != 2 or self.faces.shape[1] != 3:
                raise ValueError("faces must be an (F, 3) array")
            if self.euler_characteristic() != 1:
                raise ValueError(f"Euler characteristic {self.euler_characteristic()} != 1")

    @property
    def n_vertices(self) -> int:
        return len(self.kinds)

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    @cached_property
    def edges(self) -> np.ndarray:
        """Unique undirected edges as a sorted ``(E, 2)`` array."""
        f = self.faces
        e = np.concatenate([f[:, [0, 1]], f[:, [1, 2]], f[:, [2, 0]]])
        e.sort(axis=1)
        return np.unique(e, axis=0)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def euler_characteristic(self) -> int:
        return self.n_vertices - self.n_edges + self.n_faces

    @cached_property
    def boundary_mask(self) -> np.ndarray:
        f = self.faces
        d = np.concatenate([f[:, [0, 1]], f[:, [1, 2]], f[:, [2, 0]]])
        n = self.n_vertices
        fwd = d[:, 0].astype(np.int64) * n + d[:, 1]
        rev = d[:, 1].astype(np.int64) * n + d[:, 0]
        lone = ~np.isin(fwd, rev)
        mask = np.zeros(n, dtype=bool)
        mask[d[lone, 0]] = True
        mask[d[lone, 1]] = True
        return mask

    @cached_property
    def degrees(self) -> np.ndarray:
        e = self.edges
        return np.bincount(e.ravel(), minlength=self.n_vertices)


def star_triangulate(c: PentagonComplex) -> TriComplex:
    """Cone every pentagon from a new center vertex: 5 triangles per face."""
    nv = c.n_vertices
    centers = tuple(range(nv, nv + c.n_faces))
    tris = []
    for f, face in enumerate(c.faces):
        z = centers[f]
        for i in range(5):
            tris.append((z, face[i], face[(i + 1) % 5]))
    kinds = np.array([CORNER] * nv + [CENTER] * c.n_faces, dtype=np.int8)
    chains = {(min(u, v), max(u, v)): (min(u, v), max(u, v)) for u, v in c.edges}
    return TriComplex(
        np.array(tris, dtype=np.int64),
        kinds,
        np.zeros(len(kinds), dtype=np.int16),
        chains,
        c,
        0,
        centers,
    )


def hex_refine(t: TriComplex) -> TriComplex:
    """Put a vertex on every edge midpoint; each triangle becomes four."""
    nv = t.n_vertices
    edges = t.edges
    keys = edges[:, 0] * nv + edges[:, 1]

    def mid(a: np.ndarray, b: np.ndarray) -> np.ndarray:
        lo, hi = np.minimum(a, b), np.maximum(a, b)
        return nv + np.searchsorted(keys, lo * nv + hi)

    f = t.faces
    a, b, c = f[:, 0], f[:, 1], f[:, 2]
    mab, mbc, mca = mid(a, b), mid(b, c), mid(c, a)
    new = np.stack(
        [
            np.stack([a, mab, mca], axis=1),
            np.stack([mab, b, mbc], axis=1),
            np.stack([mca, mbc, c], axis=1),
            np.stack([mab, mbc, mca], axis=1),
        ],
        axis=1,
    ).reshape(-1, 3)
    level = t.refinement_level + 1
    kinds = np.concatenate([t.kinds, np.full(len(edges), MIDPOINT, dtype=np.int8)])
    mlev = np.concatenate([t.midpoint_level, np.full(len(edges), level, dtype=np.int16)])
    chains = {}
    for key, chain in t.chains.items():
        ch = np.asarray(chain)
        ms = mid(ch[:-1], ch[1:])
        out = np.empty(2 * len(ch) - 1, dtype=np.int64)
        out[0::2] = ch
        out[1::2] = ms
        chains[key] = tuple(int(x) for x in out)
    out_t = TriComplex(new, kinds, mlev, chains, t.origin, level, t.face_centers, _check=False)
    if (out_t.n_vertices, out_t.n_faces) != (nv + len(edges), 4 * t.n_faces):
        raise AssertionError("hexagonal refinement counts are off")
    if out_t.euler_characteristic() != 1:
        raise ValueError("refinement broke the disk topology")
    return out_t


# angles ------------------------------------------------------------------------


def corner_angles(faces: np.ndarray, radii: np.ndarray) -> np.ndarray:
    """Angle at each corner of each tangency triangle, shape ``(F, 3)``.

    Uses ``sin(a/2) = sqrt(r_b r_c / ((r_a + r_b)(r_a + r_c)))``, the
    law of cosines rewritten for mutually tangent circles.
    """
    r = radii[faces]
    ra, rb, rc = r[:, 0], r[:, 1], r[:, 2]
    out = np.empty_like(r)
    out[:, 0] = 2.0 * np.arcsin(np.sqrt(rb * rc / ((ra + rb) * (ra + rc))))
    out[:, 1] = 2.0 * np.arcsin(np.sqrt(ra * rc / ((rb + ra) * (rb + rc))))
    out[:, 2] = 2.0 * np.arcsin(np.sqrt(ra * rb / ((rc + ra) * (rc + rb))))
    return out


def angle_sums(t: TriComplex, radii: np.ndarray) -> np.ndarray:
    ang = corner_angles(t.faces, radii)
    return np.bincount(t.faces.ravel(), weights=ang.ravel(), minlength=t.n_vertices)


def _angle_jacobian(t: TriComplex, radii: np.ndarray) -> sp.csr_matrix:
    """Minus the Jacobian of the angle sums with respect to log radii.

    In a tangency triangle ``d(angle_i)/d(log r_j) = rho / (r_i + r_j)`` for
    ``i != j``, where ``rho`` is the inradius.  The result is a weighted graph
    Laplacian.
    """
    f = t.faces
    r = radii[f]
    rho = np.sqrt(r[:, 0] * r[:, 1] * r[:, 2] / r.sum(axis=1))
    rows, cols, vals = [], [], []
    for i, j in ((0, 1), (1, 2), (2, 0)):
        w = rho / (r[:, i] + r[:, j])
        rows += [f[:, i], f[:, j]]
        cols += [f[:, j], f[:, i]]
        vals += [w, w]
    n = t.n_vertices
    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    vals = np.concatenate(vals)
    offd = sp.coo_matrix((-vals, (rows, cols)), shape=(n, n)).tocsr()
    diag = -np.asarray(offd.sum(axis=1)).ravel()
    return (offd + sp.diags(diag)).tocsr()


@dataclass(frozen=True, eq=False)
class Packing:
    tri: TriComplex
    radii: np.ndarray
    centers: np.ndarray | None = None  # complex
    angle_residual: float = math.inf
    tangency_residual: float = math.inf
    history: tuple[float, ...] = ()  # max residual per iteration
    total_history: tuple[float, ...] = ()  # summed |residual| per sweep (sweep method only)

    @property
    def level(self) -> int:
        return self.tri.origin.level if self.tri.origin is not None else 0

    @property
    def refine(self) -> int:
        return self.tri.refinement_level

    def to_dict(self) -> dict:
        if self.centers is None:
            raise ValueError("packing has no layout yet")
        return {
            "level": self.level,
            "refine": self.refine,
            "radii": [float(x) for x in self.radii],
            "centers": [[float(z.real), float(z.imag)] for z in self.centers],
            "angle_residual": float(self.angle_residual),
            "tangency_residual": float(self.tangency_residual),
        }

    def to_json(self) -> str:
        # repr of a float is the shortest string that round-trips exactly
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> Packing:
        tri = refined_triangulation(int(data["level"]), int(data["refine"]))
        radii = np.array(data["radii"], dtype=float)
        xy = np.array(data["centers"], dtype=float)
        if len(radii) != tri.n_vertices or len(xy) != tri.n_vertices:
            raise ValueError("packing file does not match its level/refine triangulation")
        return cls(
            tri,
            radii,
            xy[:, 0] + 1j * xy[:, 1],
            float(data["angle_residual"]),
            float(data["tangency_residual"]),
        )

    @classmethod
    def from_json(cls, text: str) -> Packing:
        return cls.from_dict(json.loads(text))


def refined_triangulation(n: int, m: int) -> TriComplex:
    t = star_triangulate(build_kn(n))
    for _ in range(m):
        t = hex_refine(t)
    return t


# radii -------------------------------------------------------------------------


def _interior_residual(t: TriComplex, radii: np.ndarray, interior: np.ndarray) -> np.ndarray:
    return angle_sums(t, radii)[interior] - TWO_PI


def solve_radii(
    t: TriComplex,
    boundary_radius: float = 1.0,
    tol: float = 1e-10,
    max_iters: int = 1_000_000,
    method: str = "newton",
) -> Packing:
    """Interior radii making every interior angle sum 2*pi; boundary radii fixed.

    ``method="newton"`` takes damped Newton steps in log radii (the Jacobian is
    a weighted Laplacian, so each step is one sparse solve).  ``"sweep"`` is
    the classical per-vertex uniform-neighbour update in fixed vertex order.
    Raises PackingError when ``max_iters`` is exhausted.
    """
    if boundary_radius <= 0:
        raise ValueError("boundary_radius must be positive")
    if t.euler_characteristic() != 1:
        raise ValueError("circle packing needs a triangulated disk")
    interior = ~t.boundary_mask
    if not interior.any():
        raise ValueError("triangulation has no interior vertex")
    radii = np.full(t.n_vertices, float(boundary_radius))
    totals: list[float] = []
    if method == "newton":
        radii, hist = _newton(t, radii, interior, tol, max_iters)
    elif method == "sweep":
        radii, hist, totals = _sweep(t, radii, interior, tol, max_iters)
    else:
        raise ValueError(f"unknown method {method!r}")
    return Packing(t, radii, angle_residual=hist[-1], history=tuple(hist), total_history=tuple(totals))


def _newton(t, radii, interior, tol, max_iters):
    idx = np.flatnonzero(interior)
    u = np.log(radii)
    res = _interior_residual(t, radii, interior)
    hist = [float(np.abs(res).max())]
    it = 0
    while hist[-1] > tol:
        if it >= max_iters:
            raise PackingError("Newton iteration did not converge", hist[-1])
        it += 1
        lap = _angle_jacobian(t, np.exp(u))[idx][:, idx].tocsc()
        step = spla.spsolve(lap, res)
        h = 1.0
        while True:
            trial = u.copy()
            trial[idx] += h * step
            tres = _interior_residual(t, np.exp(trial), interior)
            err = float(np.abs(tres).max())
            if err < hist[-1] or h < 1e-8:
                break
            h *= 0.5
        if err >= hist[-1]:
            # rounding floor reached
            if hist[-1] <= tol:
                break
            raise PackingError("Newton line search stalled", hist[-1])
        u, res = trial, tres
        hist.append(err)
    return np.exp(u), hist


def _flowers(t: TriComplex) -> list[list[tuple[int, int]]]:
    pairs: list[list[tuple[int, int]]] = [[] for _ in range(t.n_vertices)]
    for a, b, c in t.faces.tolist():
        pairs[a].append((b, c))
        pairs[b].append((c, a))
        pairs[c].append((a, b))
    return pairs


def _sweep(t, radii, interior, tol, max_iters):
    r = radii.tolist()
    petals = _flowers(t)
    verts = np.flatnonzero(interior).tolist()
    nbrs = [len(petals[v]) for v in range(t.n_vertices)]
    asin, sqrt, sin = math.asin, math.sqrt, math.sin

    def theta(v: int) -> float:
        rv = r[v]
        s = 0.0
        for a, b in petals[v]:
            ra, rb = r[a], r[b]
            s += 2.0 * asin(sqrt(ra * rb / ((rv + ra) * (rv + rb))))
        return s

    def errors() -> tuple[float, float]:
        err = [abs(theta(v) - TWO_PI) for v in verts]
        return max(err), math.fsum(err)

    # the max residual may tick up for a sweep or two; the total never does
    e, tot = errors()
    hist, totals = [e], [tot]
    it = 0
    while hist[-1] > tol:
        if it >= max_iters:
            raise PackingError("radius sweeps did not converge", hist[-1])
        it += 1
        for v in verts:
            k = nbrs[v]
            beta = sin(theta(v) / (2 * k))
            delta = sin(math.pi / k)
            rhat = beta * r[v] / (1.0 - beta)
            r[v] = rhat * (1.0 - delta) / delta
        e, tot = errors()
        hist.append(e)
        totals.append(tot)
    return np.array(r), hist, totals


# layout ------------------------------------------------------------------------


def _seed_face(t: TriComplex) -> int:
    if t.origin is not None and t.origin.center_face is not None and t.face_centers:
        z = t.face_centers[t.origin.center_face]
        hits = np.flatnonzero((t.faces == z).any(axis=1))
        if len(hits):
            return int(hits[0])
    return 0


def layout(
    t: TriComplex, radii: np.ndarray, tangency_tol: float = 1e-6, seed: int | None = None
) -> Packing:
    """Place centers triangle by triangle, breadth-first from a seed triangle.

    The seed's first vertex goes to the origin and its second onto the
    positive real axis.  Raises PackingError when the relative tangency error
    or a negatively oriented triangle shows the radii were not converged.
    """
    radii = np.asarray(radii, dtype=float)
    faces = t.faces
    ang = corner_angles(faces, radii)
    opposite: dict[tuple[int, int], int] = {}
    fl = faces.tolist()
    for fi, (a, b, c) in enumerate(fl):
        opposite[(a, b)] = fi
        opposite[(b, c)] = fi
        opposite[(c, a)] = fi
    seed = _seed_face(t) if seed is None else seed
    z = np.full(t.n_vertices, np.nan + 0j)
    placed = np.zeros(t.n_vertices, dtype=bool)
    a, b, c = fl[seed]
    z[a] = 0.0
    z[b] = radii[a] + radii[b]
    z[c] = z[a] + (radii[a] + radii[c]) * np.exp(1j * ang[seed, 0])
    placed[[a, b, c]] = True
    done = np.zeros(len(fl), dtype=bool)
    done[seed] = True
    queue = deque([seed])
    while queue:
        fi = queue.popleft()
        tri = fl[fi]
        for k in range(3):
            u, v = tri[k], tri[(k + 1) % 3]
            g = opposite.get((v, u))
            if g is None or done[g]:
                continue
            done[g] = True
            gt = fl[g]
            j = gt.index(v)  # g = (v, u, w) up to rotation
            w = gt[(j + 2) % 3]
            if not placed[w]:
                d = z[u] - z[v]
                z[w] = z[v] + (radii[v] + radii[w]) * d / abs(d) * np.exp(1j * ang[g, j])
                placed[w] = True
            queue.append(g)
    if not placed.all():
        raise ValueError("triangulation is not edge-connected")
    e = t.edges
    dist = np.abs(z[e[:, 0]] - z[e[:, 1]])
    rs = radii[e[:, 0]] + radii[e[:, 1]]
    tang = float(np.max(np.abs(dist - rs) / rs))
    p0, p1, p2 = z[faces[:, 0]], z[faces[:, 1]], z[faces[:, 2]]
    area = ((p1 - p0).conjugate() * (p2 - p0)).imag
    res = float(np.abs(_interior_residual(t, radii, ~t.boundary_mask)).max())
    if tang > tangency_tol:
        raise PackingError("layout tangency error above tolerance", tang)
    if (area <= 0).any():
        raise PackingError("layout has negatively oriented triangles", float((area <= 0).sum()))
    return Packing(t, radii, z, res, tang)


# normalization -----------------------------------------------------------------


def tile_polyline(t: TriComplex, face: tuple[int, ...]) -> np.ndarray:
    """Vertex ids around a pentagon face along its refined edges (not closed)."""
    out: list[int] = []
    for i in range(5):
        u, v = face[i], face[(i + 1) % 5]
        ch = t.chains[(min(u, v), max(u, v))]
        if ch[0] != u:
            ch = ch[::-1]
        out.extend(ch[:-1])
    return np.array(out, dtype=np.int64)


def normalize(p: Packing) -> Packing:
    """Similarity putting the central tile's corner centroid at 0, its first
    corner on the positive real axis, and its diameter at 1."""
    if p.centers is None:
        raise ValueError("normalize needs a laid-out packing")
    origin = p.tri.origin
    face = origin.faces[origin.center_face]
    corners = p.centers[list(face)]
    shift = corners.mean()
    rot = corners[0] - shift
    rot = rot.conjugate() / abs(rot)
    ring = (p.centers[tile_polyline(p.tri, face)] - shift) * rot
    diff = ring[:, None] - ring[None, :]
    scale = 1.0 / np.abs(diff).max()
    z = (p.centers - shift) * rot * scale
    return replace(p, centers=z, radii=p.radii * scale)


def pack_complex(
    n: int,
    m: int,
    boundary_radius: float = 1.0,
    tol: float = 1e-10,
    max_iters: int = 1_000_000,
    normalized: bool = True,
    method: str = "newton",
) -> Packing:
    """Solve and lay out the packing of ``K_n`` refined ``m`` times."""
    if n < 0 or m < 0:
        raise ValueError("level and refinement must be nonnegative")
    t = refined_triangulation(n, m)
    solved = solve_radii(t, boundary_radius, tol, max_iters, method)
    p = layout(t, solved.radii)
    p = replace(p, history=solved.history)
    return normalize(p) if normalized else p
