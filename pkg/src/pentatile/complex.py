"""Oriented pentagonal CW-complexes homeomorphic to a closed disk.

Faces are counterclockwise 5-cycles of dense vertex indices.  Everything
else (half-edges, boundary, degrees) is derived on demand and cached, so a
complex is fully described by its face list plus a few labels.
"""

from __future__ import annotations

import json
from collections import Counter, deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

Face = tuple[int, int, int, int, int]
HalfEdge = tuple[int, int]


class ComplexError(ValueError):
    """Raised when a face list does not describe a valid pentagonal disk."""


@dataclass(frozen=True)
class CellMap:
    """Cell-preserving bijection ``vertex_map[v_src] = v_dst``,
    ``face_map[f_src] = f_dst``."""

    vertex_map: tuple[int, ...]
    face_map: tuple[int, ...]

    def compose(self, other: CellMap) -> CellMap:
        """Return ``self`` after ``other`` (apply ``other`` first)."""
        return CellMap(
            tuple(self.vertex_map[v] for v in other.vertex_map),
            tuple(self.face_map[f] for f in other.face_map),
        )

    def is_identity(self) -> bool:
        return all(i == v for i, v in enumerate(self.vertex_map)) and all(
            i == f for i, f in enumerate(self.face_map)
        )


@dataclass(frozen=True)
class PentagonComplex:
    """A pentagonal disk.

    ``ancestry[f] = (parent_face, slot)`` is present for complexes built by
    subdivision; slot 5 is the central child and slot ``i`` the outer child at
    the parent's ``i``-th corner.  ``center_vertex`` marks the root of a
    vertex-star patch.
    """

    faces: tuple[Face, ...]
    n_vertices: int
    level: int = 0
    center_face: int | None = 0
    center_vertex: int | None = None
    ancestry: tuple[tuple[int, int], ...] | None = field(default=None, compare=False)
    strict: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self) -> None:
        self._validate()

    # structure ---------------------------------------------------------

    @property
    def vertices(self) -> range:
        return range(self.n_vertices)

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    @cached_property
    def half_edges(self) -> dict[HalfEdge, tuple[int, int]]:
        """Directed edge ``(u, v)`` -> ``(face, position of u in face)``.

        The twin of ``(u, v)`` is ``(v, u)``; the next half-edge in the face
        starts at ``v``.
        """
        he: dict[HalfEdge, tuple[int, int]] = {}
        for f, face in enumerate(self.faces):
            for i in range(5):
                key = (face[i], face[(i + 1) % 5])
                if key in he:
                    raise ComplexError(f"half-edge {key} used twice (orientation clash)")
                he[key] = (f, i)
        return he

    @cached_property
    def edges(self) -> frozenset[tuple[int, int]]:
        return frozenset((min(u, v), max(u, v)) for u, v in self.half_edges)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def euler_characteristic(self) -> int:
        return self.n_vertices - self.n_edges + self.n_faces

    @cached_property
    def boundary_half_edges(self) -> dict[int, int]:
        """Boundary successor map, counterclockwise around the disk."""
        he = self.half_edges
        nxt: dict[int, int] = {}
        for u, v in he:
            if (v, u) not in he:
                nxt[u] = v
        return nxt

    @cached_property
    def boundary(self) -> tuple[int, ...]:
        """Counterclockwise boundary cycle starting at its smallest vertex."""
        nxt = self.boundary_half_edges
        if not nxt:
            return ()
        start = min(nxt)
        cycle = [start]
        v = nxt[start]
        while v != start:
            cycle.append(v)
            v = nxt[v]
            if len(cycle) > len(nxt):
                break
        return tuple(cycle)

    @cached_property
    def boundary_vertices(self) -> frozenset[int]:
        return frozenset(self.boundary_half_edges)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        deg = [0] * self.n_vertices
        for face in self.faces:
            for v in face:
                deg[v] += 1
        return tuple(deg)

    @cached_property
    def vertex_faces(self) -> tuple[tuple[int, ...], ...]:
        vf: list[list[int]] = [[] for _ in range(self.n_vertices)]
        for f, face in enumerate(self.faces):
            for v in face:
                vf[v].append(f)
        return tuple(tuple(x) for x in vf)

    def interior_vertices(self) -> list[int]:
        bd = self.boundary_vertices
        return [v for v in self.vertices if v not in bd]

    @cached_property
    def face_depths(self) -> tuple[int, ...]:
        """Combinatorial distance of each face from the boundary.

        Faces with a boundary corner have depth 0; a face sharing a vertex
        with a depth-k face and with no shallower neighbour has depth k+1.
        """
        depth = [-1] * self.n_faces
        bd = self.boundary_vertices
        queue: deque[int] = deque()
        for f, face in enumerate(self.faces):
            if any(v in bd for v in face):
                depth[f] = 0
                queue.append(f)
        while queue:
            f = queue.popleft()
            for v in self.faces[f]:
                for g in self.vertex_faces[v]:
                    if depth[g] < 0:
                        depth[g] = depth[f] + 1
                        queue.append(g)
        return tuple(depth)

    @cached_property
    def super_corners(self) -> tuple[int, ...]:
        """Boundary vertices of degree 1, in boundary order.

        For ``K_n`` these are the five corners of the original pentagon.
        """
        deg = self.degrees
        return tuple(v for v in self.boundary if deg[v] == 1)

    # validation --------------------------------------------------------

    def _validate(self) -> None:
        for f, face in enumerate(self.faces):
            if len(face) != 5 or len(set(face)) != 5:
                raise ComplexError(f"face {f} is not a pentagon: {face}")
            if any(not 0 <= v < self.n_vertices for v in face):
                raise ComplexError(f"face {f} has an unknown vertex: {face}")
        self.half_edges  # raises on orientation clash
        if any(d == 0 for d in self.degrees):
            raise ComplexError("isolated vertex")
        if self.euler_characteristic() != 1:
            raise ComplexError(f"Euler characteristic {self.euler_characteristic()} != 1")
        if self.center_face is not None and not 0 <= self.center_face < self.n_faces:
            raise ComplexError("center_face out of range")
        if not self.strict:
            return
        if len(self.boundary) != len(self.boundary_half_edges):
            raise ComplexError("boundary is not a single simple cycle")
        deg = self.degrees
        bad = [v for v in self.interior_vertices() if deg[v] not in (3, 4)]
        if bad:
            raise ComplexError(f"interior vertices of degree outside {{3, 4}}: {bad[:5]}")

    # serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "faces": [list(f) for f in self.faces],
            "center_face": self.center_face,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> PentagonComplex:
        faces = tuple(tuple(int(v) for v in f) for f in data["faces"])
        level = int(data["level"])
        n_vertices = 1 + max(max(f) for f in faces)
        ancestry = None
        # subdivision emits children parent-major, slot-minor
        if level > 0 and len(faces) == 6**level:
            ancestry = tuple((f // 6, f % 6) for f in range(len(faces)))
        return cls(faces, n_vertices, level, data.get("center_face"), ancestry=ancestry)

    @classmethod
    def from_json(cls, text: str) -> PentagonComplex:
        return cls.from_dict(json.loads(text))


def build_k0() -> PentagonComplex:
    """The combinatorial pentagon: one face, five vertices, five edges."""
    return PentagonComplex(((0, 1, 2, 3, 4),), 5, level=0, center_face=0)


def vertex_degree(c: PentagonComplex, v: int) -> int:
    """Number of faces incident to ``v``."""
    if not 0 <= v < c.n_vertices:
        raise KeyError(f"unknown vertex {v}")
    return c.degrees[v]


def boundary_cycle(c: PentagonComplex) -> tuple[int, ...]:
    return c.boundary


def mirror(c: PentagonComplex) -> PentagonComplex:
    """Same complex with every face orientation reversed (vertex 0 kept first)."""
    faces = tuple((f[0], f[4], f[3], f[2], f[1]) for f in c.faces)
    return PentagonComplex(
        faces, c.n_vertices, c.level, c.center_face, c.center_vertex, c.ancestry, c.strict
    )


# canonical encodings ---------------------------------------------------------


def _encode(
    c: PentagonComplex, face: int, start: int, limit: Sequence | None = None
) -> tuple[tuple[Face, ...], list[int], list[int]] | None:
    """Breadth-first relabelling of ``c`` rooted at corner ``start`` of ``face``.

    Returns the face tuples in new labels, plus ``new label -> old vertex``
    and ``new face index -> old face``.  With ``limit`` given, stops and
    returns None at the first face tuple that differs from ``limit``.
    """
    he = c.half_edges
    faces = c.faces
    vlabel: dict[int, int] = {}
    vorder: list[int] = []
    fseen = {face}
    forder: list[int] = []
    code: list[Face] = []
    queue: deque[tuple[int, int]] = deque([(face, start)])
    while queue:
        f, s = queue.popleft()
        fv = faces[f]
        rot = fv[s:] + fv[:s]
        for v in rot:
            if v not in vlabel:
                vlabel[v] = len(vorder)
                vorder.append(v)
        t = tuple(vlabel[v] for v in rot)
        if limit is not None and (len(code) >= len(limit) or limit[len(code)] != t):
            return None
        code.append(t)
        forder.append(f)
        for k in range(5):
            a, b = rot[k], rot[(k + 1) % 5]
            hit = he.get((b, a))
            if hit is not None and hit[0] not in fseen:
                fseen.add(hit[0])
                queue.append(hit)
    if limit is not None and len(code) != len(limit):
        return None
    return tuple(code), vorder, forder


def _roots(c: PentagonComplex, centered: bool) -> Iterator[tuple[int, int]]:
    if centered and c.center_vertex is not None:
        v = c.center_vertex
        for f in c.vertex_faces[v]:
            yield f, c.faces[f].index(v)
    elif centered and c.center_face is not None:
        for s in range(5):
            yield c.center_face, s
    else:
        for f in range(c.n_faces):
            for s in range(5):
                yield f, s


def _variants(c: PentagonComplex, allow_reflection: bool) -> list[PentagonComplex]:
    return [c, mirror(c)] if allow_reflection else [c]


def canonical_code(
    c: PentagonComplex, allow_reflection: bool = True, centered: bool = True
) -> tuple[Face, ...]:
    """Lexicographically minimal rooted encoding; equal codes <=> isomorphic.

    With ``centered`` the roots range over the marked center (vertex or face)
    only, so the code classifies center-preserving isomorphism.
    """
    best = None
    for var in _variants(c, allow_reflection):
        for f, s in _roots(var, centered):
            code = _encode(var, f, s)[0]
            if best is None or code < best:
                best = code
    return best


def _cellmap(src_vorder, src_forder, dst_vorder, dst_forder, nv, nf) -> CellMap:
    vmap = [0] * nv
    for a, b in zip(src_vorder, dst_vorder):
        vmap[a] = b
    fmap = [0] * nf
    for a, b in zip(src_forder, dst_forder):
        fmap[a] = b
    return CellMap(tuple(vmap), tuple(fmap))


def is_isomorphic(
    p1: PentagonComplex, p2: PentagonComplex, allow_reflection: bool = True
) -> CellMap | None:
    """Find a cell-preserving map ``p1 -> p2``, or None.

    When both complexes carry a center (face or star vertex) only
    center-preserving maps are searched.
    """
    if (p1.n_vertices, p1.n_faces, p1.n_edges) != (p2.n_vertices, p2.n_faces, p2.n_edges):
        return None
    centered = (p1.center_vertex is not None and p2.center_vertex is not None) or (
        p1.center_vertex is None
        and p2.center_vertex is None
        and p1.center_face is not None
        and p2.center_face is not None
    )
    f0, s0 = next(_roots(p1, centered))
    ref, vo1, fo1 = _encode(p1, f0, s0)
    if len(fo1) != p1.n_faces:
        raise ComplexError("complex is not edge-connected")
    for var in _variants(p2, allow_reflection):
        for f, s in _roots(var, centered):
            hit = _encode(var, f, s, limit=ref)
            if hit is not None:
                _, vo2, fo2 = hit
                return _cellmap(vo1, fo1, vo2, fo2, p1.n_vertices, p1.n_faces)
    return None


def automorphisms(c: PentagonComplex) -> list[CellMap]:
    """All cell-preserving self-maps of ``c``, orientation reversing included.

    Every face is tried as the image of a reference face; candidates are
    pruned by face depth and corner-degree multiset, both preserved by any
    automorphism.
    """
    f0 = c.center_face if c.center_face is not None else 0
    ref, vo1, fo1 = _encode(c, f0, 0)
    depth = c.face_depths
    deg = c.degrees

    def signature(f: int) -> tuple:
        return depth[f], sorted(deg[v] for v in c.faces[f])

    target = signature(f0)
    maps: list[CellMap] = []
    for var in _variants(c, True):
        for f in range(c.n_faces):
            if signature(f) != target:
                continue
            for s in range(5):
                hit = _encode(var, f, s, limit=ref)
                if hit is not None:
                    maps.append(_cellmap(vo1, fo1, hit[1], hit[2], c.n_vertices, c.n_faces))
    return maps


# patches ---------------------------------------------------------------------


def vertex_star(c: PentagonComplex, v: int, r: int) -> PentagonComplex:
    """Faces within ``r`` vertex-sharing steps of the faces at ``v``.

    Raises ValueError when the growth would need a boundary vertex, i.e. when
    the star in ``c`` might differ from the star in a larger complex.
    """
    if not 0 <= v < c.n_vertices:
        raise KeyError(f"unknown vertex {v}")
    bd = c.boundary_vertices
    if v in bd:
        raise ValueError(f"vertex {v} lies on the boundary")
    faces = set(c.vertex_faces[v])
    for _ in range(r):
        verts = {w for f in faces for w in c.faces[f]}
        if verts & bd:
            raise ValueError(f"star of radius {r} at {v} touches the boundary")
        faces = {g for w in verts for g in c.vertex_faces[w]}
    ordered = sorted(faces)
    relabel: dict[int, int] = {v: 0}
    for f in ordered:
        for w in c.faces[f]:
            relabel.setdefault(w, len(relabel))
    new_faces = tuple(tuple(relabel[w] for w in c.faces[f]) for f in ordered)
    return PentagonComplex(
        new_faces, len(relabel), c.level, center_face=None, center_vertex=0, strict=False
    )


def patch_census(c: PentagonComplex, r: int, allow_reflection: bool = True) -> Counter:
    """Isomorphism classes of radius-``r`` vertex stars over interior vertices.

    Vertices whose star would reach the boundary are skipped.  Keys are
    canonical codes.
    """
    if r < 0:
        raise ValueError("radius must be nonnegative")
    census: Counter = Counter()
    for v in c.interior_vertices():
        try:
            star = vertex_star(c, v, r)
        except ValueError:
            continue
        census[canonical_code(star, allow_reflection)] += 1
    return census


def relabel(c: PentagonComplex, vertex_perm: Sequence[int], face_perm: Iterable[int] | None = None) -> PentagonComplex:
    """Copy of ``c`` with vertex ``v`` renamed ``vertex_perm[v]`` and faces
    reordered so that new face ``i`` is old face ``face_perm[i]``."""
    order = list(face_perm) if face_perm is not None else list(range(c.n_faces))
    faces = tuple(tuple(vertex_perm[v] for v in c.faces[f]) for f in order)
    center = order.index(c.center_face) if c.center_face is not None else None
    cv = vertex_perm[c.center_vertex] if c.center_vertex is not None else None
    return PentagonComplex(faces, c.n_vertices, c.level, center, cv, strict=c.strict)
