"""The one-into-six pentagonal subdivision rule and its prototile bookkeeping."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .complex import ComplexError, PentagonComplex, build_k0

CENTRAL_SLOT = 5


def subdivide(c: PentagonComplex) -> PentagonComplex:
    """Split every pentagon into a central pentagon and five outer ones.

    For a face ``(v0..v4)`` a midpoint ``m_i`` is put on edge ``(v_i, v_i+1)``
    and inner corners ``c_i`` are added; the children are the central face
    ``(c0..c4)`` and the outer faces ``(m_i-1, v_i, m_i, c_i, c_i-1)``.
    Old vertices keep their ids; children of face ``p`` get ids ``6p..6p+5``
    with the central child last.
    """
    midpoint: dict[tuple[int, int], int] = {}
    nv = c.n_vertices
    faces = []
    ancestry = []
    for p, (v0, v1, v2, v3, v4) in enumerate(c.faces):
        vs = (v0, v1, v2, v3, v4)
        ms = []
        for i in range(5):
            key = (min(vs[i], vs[(i + 1) % 5]), max(vs[i], vs[(i + 1) % 5]))
            if key not in midpoint:
                midpoint[key] = nv
                nv += 1
            ms.append(midpoint[key])
        cs = list(range(nv, nv + 5))
        nv += 5
        for i in range(5):
            faces.append((ms[i - 1], vs[i], ms[i], cs[i], cs[i - 1]))
            ancestry.append((p, i))
        faces.append(tuple(cs))
        ancestry.append((p, CENTRAL_SLOT))
    center = 6 * c.center_face + CENTRAL_SLOT
    out = PentagonComplex(tuple(faces), nv, c.level + 1, center, ancestry=tuple(ancestry))
    if (out.n_vertices, out.n_edges, out.n_faces) != (
        c.n_vertices + c.n_edges + 5 * c.n_faces,
        2 * c.n_edges + 10 * c.n_faces,
        6 * c.n_faces,
    ):
        raise ComplexError("subdivision counts do not follow the recurrence")
    return out


@lru_cache(maxsize=None)
def build_kn(n: int) -> PentagonComplex:
    """``K_n``: the ``n``-fold subdivision of the base pentagon (cached)."""
    if n < 0:
        raise ValueError("level must be nonnegative")
    return build_k0() if n == 0 else subdivide(build_kn(n - 1))


def build_tower(n: int) -> list[PentagonComplex]:
    """``[K_0, ..., K_n]``, each the subdivision of the previous one."""
    return [build_kn(k) for k in range(n + 1)]


def _super_edges(c: PentagonComplex) -> list[list[int]]:
    """Boundary cut at the five super-corners; run ``k`` goes counterclockwise
    from corner ``k`` to corner ``k+1`` (endpoints included)."""
    corners = set(c.super_corners)
    if len(corners) != 5:
        raise ComplexError(f"expected 5 super-corners, found {len(corners)}")
    bd = list(c.boundary)
    first = next(i for i, v in enumerate(bd) if v in corners)
    bd = bd[first:] + bd[:first]
    runs: list[list[int]] = []
    for v in bd + bd[:1]:
        if v in corners and runs:
            runs[-1].append(v)
        if v in corners:
            runs.append([v])
        else:
            runs[-1].append(v)
    return runs[:5]


def reflect_expand(c: PentagonComplex) -> PentagonComplex:
    """Glue ``c`` to five mirror copies of itself, one across each super-edge.

    At each super-corner the two free super-edges leaving it (one in each
    neighbouring mirror copy) are identified.  The result is combinatorially
    the subdivision of ``c``; it carries no ancestry.
    """
    runs = _super_edges(c)
    nxt = c.n_vertices
    copies: list[list[int]] = []
    for k in range(5):
        fixed = set(runs[k])
        ids = []
        for v in range(c.n_vertices):
            if v in fixed:
                ids.append(v)
            else:
                ids.append(nxt)
                nxt += 1
        copies.append(ids)
    parent = list(range(nxt))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for k in range(5):
        # corner k: copy k carries the image of runs[k-1], copy k-1 that of runs[k]
        outward_a = [copies[k][v] for v in reversed(runs[k - 1])]
        outward_b = [copies[k - 1][v] for v in runs[k]]
        for a, b in zip(outward_a, outward_b):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    faces = list(c.faces)
    for ids in copies:
        for f in c.faces:
            g = [find(ids[v]) for v in f]
            faces.append((g[0], g[4], g[3], g[2], g[1]))
    used = sorted({v for f in faces for v in f})
    dense = {v: i for i, v in enumerate(used)}
    faces = tuple(tuple(dense[v] for v in f) for f in faces)
    return PentagonComplex(faces, len(used), c.level + 1, c.center_face)


# prototiles --------------------------------------------------------------------


def canonical_word(degrees) -> str:
    """Minimal string among the 10 rotations/reflections of a 5-letter cycle."""
    d = [str(x) for x in degrees]
    if len(d) != 5:
        raise ValueError("a degree word has exactly five letters")
    forms = []
    for w in (d, d[::-1]):
        for i in range(5):
            forms.append("".join(w[i:] + w[:i]))
    return min(forms)


def corner_degree_word(c: PentagonComplex, f: int) -> str:
    """Canonical cyclic word of the five corner degrees of face ``f``.

    Faces touching the boundary are rejected: their corner degrees are not
    final.
    """
    if c.face_depths[f] < 1:
        raise ValueError(f"face {f} touches the boundary; its corner degrees are not final")
    word = canonical_word(c.degrees[v] for v in c.faces[f])
    if set(word) - {"3", "4"}:
        raise ComplexError(f"face {f} has an interior corner degree outside {{3, 4}}")
    return word


def interior_words(c: PentagonComplex, margin: int = 1) -> dict[int, str]:
    depth = c.face_depths
    return {f: corner_degree_word(c, f) for f in range(c.n_faces) if depth[f] >= margin}


@dataclass(frozen=True)
class SubstitutionMatrix:
    """``matrix[i][j]``: children of class ``classes[i]`` in a class-``j`` face."""

    classes: tuple[str, ...]
    matrix: np.ndarray

    def to_dict(self) -> dict:
        return {"classes": list(self.classes), "matrix": self.matrix.tolist()}


def substitution_matrix(level: int = 4) -> SubstitutionMatrix:
    """Count child classes of every interior face of ``K_{level-1}``.

    Children are read from ``K_level`` through ancestry.  Raises ComplexError
    if two parents of the same class produce different child counts.
    """
    if level < 2:
        raise ValueError("need level >= 2 so that some parent face is interior")
    coarse, fine = build_kn(level - 1), build_kn(level)
    parent_words = interior_words(coarse)
    child_words = interior_words(fine)
    children: dict[int, list[str]] = defaultdict(list)
    for f, (p, _slot) in enumerate(fine.ancestry):
        if p in parent_words:
            children[p].append(child_words[f])
    classes = tuple(sorted(set(parent_words.values()) | set(child_words.values())))
    idx = {w: i for i, w in enumerate(classes)}
    columns: dict[str, np.ndarray] = {}
    for p, kids in children.items():
        col = np.zeros(len(classes), dtype=np.int64)
        for w in kids:
            col[idx[w]] += 1
        j = parent_words[p]
        if j in columns and not np.array_equal(columns[j], col):
            raise ComplexError(
                f"class {j} faces subdivide inconsistently: {columns[j]} vs {col}"
            )
        columns[j] = col
    missing = set(classes) - set(columns)
    if missing:
        raise ComplexError(f"no interior parent observed for classes {sorted(missing)}")
    mat = np.stack([columns[w] for w in classes], axis=1)
    return SubstitutionMatrix(classes, mat)


def child_word_rule(level: int = 4) -> dict[tuple[str, int], set[str]]:
    """Parent (canonical word, raw corner degree at slot) -> child words seen.

    Each entry must be a singleton for the rule to depend only on the parent
    word and slot.
    """
    coarse, fine = build_kn(level - 1), build_kn(level)
    parent_words = interior_words(coarse)
    child_words = interior_words(fine)
    rule: dict[tuple[str, int], set[str]] = defaultdict(set)
    for f, (p, slot) in enumerate(fine.ancestry):
        if p not in parent_words:
            continue
        raw = coarse.faces[p][slot] if slot != CENTRAL_SLOT else -1
        key_deg = coarse.degrees[raw] if raw >= 0 else 0
        rule[(parent_words[p], key_deg)].add(child_words[f])
    return dict(rule)


def is_primitive(m) -> tuple[bool, int | None]:
    """Whether some power of the nonnegative square matrix ``m`` is positive.

    Returns the smallest such power; by Wielandt's bound it suffices to
    check powers up to ``(n-1)^2 + 1``.
    """
    a = np.asarray(m)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    if (a < 0).any():
        raise ValueError("matrix must be nonnegative")
    n = a.shape[0]
    pattern = (a > 0).astype(np.int64)
    power = pattern.copy()
    for k in range(1, (n - 1) ** 2 + 2):
        if (power > 0).all():
            return True, k
        power = ((power @ pattern) > 0).astype(np.int64)
    return False, None
