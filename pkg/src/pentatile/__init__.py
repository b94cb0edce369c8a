"""Conformally regular pentagonal tiling of the plane.

``complex`` and ``subdivision`` build the combinatorial balls ``K_n``;
``circlepack`` turns them into circle packings; ``geometry`` measures the
resulting tiles; ``render`` and ``cli`` produce SVG and JSON.
"""

from .circlepack import (
    Packing,
    PackingError,
    TriComplex,
    hex_refine,
    layout,
    normalize,
    pack_complex,
    solve_radii,
    star_triangulate,
)
from .complex import (
    CellMap,
    ComplexError,
    PentagonComplex,
    automorphisms,
    boundary_cycle,
    build_k0,
    is_isomorphic,
    patch_census,
    vertex_degree,
    vertex_star,
)
from .geometry import (
    LAMBDA_EXACT,
    LAMBDA_MODULUS,
    BandCensus,
    LambdaEstimate,
    TileShape,
    band_census,
    chart_edge_transition,
    chart_vertex,
    congruence_distance,
    diameter_stats,
    estimate_lambda,
    extract_tiles,
    hausdorff_distance,
    skeleton_nesting_error,
    stats_report,
    tile_corner_angles,
)
from .subdivision import (
    SubstitutionMatrix,
    build_kn,
    corner_degree_word,
    is_primitive,
    reflect_expand,
    subdivide,
    substitution_matrix,
)

__all__ = [name for name in dir() if not name.startswith("_")]
