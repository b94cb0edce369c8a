"""Build the pentagonal balls K_n and look at what stays fixed as n grows."""
from collections import Counter

import numpy as np

from pentatile import build_kn, patch_census, reflect_expand, is_isomorphic
from pentatile.subdivision import interior_words, substitution_matrix, is_primitive

# Each pentagon splits into six: one central, five at the old corners.
print(" n      V      E      F  boundary")
for n in range(6):
    c = build_kn(n)
    print(f"{n:2d} {c.n_vertices:6d} {c.n_edges:6d} {c.n_faces:6d} {len(c.boundary):9d}")

# Gluing five mirror copies around a central one gives the same complex.
for n in range(1, 4):
    same = is_isomorphic(reflect_expand(build_kn(n - 1)), build_kn(n)) is not None
    print(f"reflection rule at n={n}: {'isomorphic' if same else 'different'}")

# Interior faces come in three kinds, told apart by their corner degrees.
for n in (2, 3, 4):
    print(n, dict(sorted(Counter(interior_words(build_kn(n)).values()).items())))

sm = substitution_matrix()
print("classes", sm.classes)
print(sm.matrix)
print("primitive, power:", is_primitive(sm.matrix))
vals = np.linalg.eigvals(sm.matrix)
print("eigenvalues", np.round(np.sort(vals.real)[::-1], 6) + 0.0)  # 6 is Perron

# Combinatorially the tiling has finite local complexity: star patterns stop
# appearing after a few levels.
for n in (3, 4, 5):
    print(f"K_{n}: {len(patch_census(build_kn(n), 1))} vertex-star classes at radius 1")
