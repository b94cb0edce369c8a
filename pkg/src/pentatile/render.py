"""Plain SVG 1.1 drawings of packings and tilings.

Coordinates are scaled so the central tile of a normalized packing is 100
units across; y is negated so the picture keeps the mathematical orientation.
All numbers are written with three decimals so equal input gives equal bytes.
"""

from __future__ import annotations

import re

import numpy as np

from .circlepack import Packing, tile_polyline
from .geometry import estimate_lambda
from .subdivision import canonical_word

MODES = ("circles", "tiles", "skeleton", "overlay-lambda")
DEFAULT_COLORS = {"33333": "#f4d03f", "33434": "#5dade2", "33444": "#ec7063"}
BOUNDARY_FILL = "#d5d8dc"
SCALE = 100.0


def _xy(z: complex) -> str:
    return f"{SCALE * z.real:.3f},{-SCALE * z.imag:.3f}"


def _polyline(points, closed: bool, **attrs) -> str:
    tag = "polygon" if closed else "polyline"
    pts = " ".join(_xy(z) for z in points)
    extra = "".join(f' {k.replace("_", "-")}="{v}"' for k, v in attrs.items())
    return f'<{tag} points="{pts}"{extra}/>'


def _document(body: list[str], extent: np.ndarray) -> str:
    pad = 0.05 * SCALE * max(np.ptp(extent.real), np.ptp(extent.imag), 1e-9)
    x0 = SCALE * extent.real.min() - pad
    y0 = -SCALE * extent.imag.max() - pad
    w = SCALE * np.ptp(extent.real) + 2 * pad
    h = SCALE * np.ptp(extent.imag) + 2 * pad
    head = (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'viewBox="{x0:.3f} {y0:.3f} {w:.3f} {h:.3f}">\n'
    )
    return head + "\n".join(body) + "\n</svg>\n"


def _skeleton(p: Packing, transform=lambda z: z, stroke="#1f3a93", width=0.6) -> list[str]:
    out = []
    for key in sorted(p.tri.chains):
        z = transform(p.centers[list(p.tri.chains[key])])
        out.append(_polyline(z, False, fill="none", stroke=stroke, stroke_width=width))
    return out


def render_svg(p: Packing, mode: str = "tiles", colors: dict[str, str] | None = None) -> str:
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; choose from {', '.join(MODES)}")
    if p.centers is None:
        raise ValueError("packing has no layout")
    colors = {**DEFAULT_COLORS, **(colors or {})}
    c = p.tri.origin
    body: list[str] = []
    extent = p.centers
    if mode == "circles":
        for z, r in zip(p.centers, p.radii):
            body.append(
                f'<circle cx="{SCALE * z.real:.3f}" cy="{-SCALE * z.imag:.3f}" '
                f'r="{SCALE * r:.3f}" fill="none" stroke="#2e4053" stroke-width="0.3"/>'
            )
        extent = np.concatenate([p.centers + p.radii, p.centers - p.radii,
                                 p.centers + 1j * p.radii, p.centers - 1j * p.radii])
    elif mode == "tiles":
        depth = c.face_depths
        for f, face in enumerate(c.faces):
            ring = p.centers[tile_polyline(p.tri, face)]
            fill = BOUNDARY_FILL
            if depth[f] >= 1:
                fill = colors[canonical_word(c.degrees[v] for v in face)]
            body.append(_polyline(ring, True, fill=fill, stroke="#17202a", stroke_width=0.5))
    elif mode == "skeleton":
        body += _skeleton(p)
    else:
        lam = estimate_lambda(p).value
        body += _skeleton(p)
        # dilate the central flower: its image should run along the skeleton
        parent = c.ancestry[c.center_face][0]
        for f in range(6 * parent, 6 * parent + 6):
            ring = p.centers[tile_polyline(p.tri, c.faces[f])] * lam
            body.append(_polyline(ring, True, fill="none", stroke="#c0392b", stroke_width=0.9))
    return _document(body, extent)


def fill_colors(svg: str) -> set[str]:
    """Distinct polygon fill colors used in an SVG produced here."""
    return set(re.findall(r'<polygon [^>]*fill="(#[0-9a-fA-F]{6})"', svg))
