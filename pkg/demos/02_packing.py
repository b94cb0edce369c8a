"""Circle packings of the star triangulation and how the tiles settle."""
import math

import numpy as np

from pentatile import pack_complex, extract_tiles, tile_corner_angles
from pentatile.circlepack import refined_triangulation, solve_radii

t = refined_triangulation(3, 1)
p = solve_radii(t)
print(f"K_3 refined once: {t.n_vertices} circles, {t.n_faces} triangles")
print("newton residuals", ["%.1e" % h for h in p.history])

p = pack_complex(3, 1)
print("tangency error %.1e" % p.tangency_residual)

# Corner angles of the central tile, against 2pi/3, as the mesh refines.
for m in range(4):
    q = pack_complex(2, m)
    cf = q.tri.origin.center_face
    tile = next(s for s in extract_tiles(q, 0) if s.face == cf)
    ang = tile_corner_angles(tile)
    print(m, np.round(np.degrees(ang), 3), "max err %.4f" % np.abs(ang - 2 * math.pi / 3).max())

# per class at a fine mesh: degree-3 corners near 120, degree-4 near 90
q = pack_complex(3, 3)
seen = {}
for s in extract_tiles(q, 2):
    for d, a in zip(s.corner_degrees, tile_corner_angles(s)):
        seen.setdefault(d, []).append(math.degrees(a))
for d, vals in sorted(seen.items()):
    print(f"degree {d}: mean {np.mean(vals):.2f} deg over {len(vals)} corners")
