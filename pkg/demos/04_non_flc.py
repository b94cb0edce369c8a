"""Geometric shapes keep multiplying while combinatorial patterns do not.

The smallest tile is the central one; its nearest rivals in size sit just
above 1.3 times its diameter and creep down with every level.
"""
from pentatile import pack_complex, extract_tiles, band_census, patch_census, build_kn

for n in (3, 4, 5):
    p = pack_complex(n, 1)
    tiles = extract_tiles(p, 2)
    d = sorted(t.diameter for t in tiles)
    runner_up = next(x for x in d if x > d[0] + 1e-9)
    print(f"K_{n}: {len(tiles)} interior tiles, max diameter {d[-1]:.3f}, runner-up ratio {runner_up:.4f}")
    for ratio in (1.3, 1.35, 2.0):
        b = band_census(tiles, d[0], ratio)
        print(f"    band x{ratio}: {b.count:4d} tiles, {b.classes:3d} shapes up to isometry")
    print(f"    vertex-star classes (radius 1): {len(patch_census(build_kn(n), 1))}")
