"""State-sum invariants of closed oriented surfaces with a defect curve."""

from defectsum.algebra import (
    BiSet,
    Character,
    CyclotomicNumber,
    FiniteGroup,
    UnitScalar,
    characters_of,
    cyclic_group,
    cyclotomic_polynomial,
    direct_product,
    regular_biset,
    symmetric_group,
    trivial_biset,
    verify_biset,
    verify_group,
)
from defectsum.moves import (
    MoveRecord,
    curve_subdivide_12,
    curve_weld_21,
    flip_22,
    random_flag_like_walk,
    subdivide_13,
    weld_31,
)
from defectsum.statesum import (
    GaugeData,
    count_admissible,
    enumerate_admissible,
    invariant_twisted,
    invariant_untwisted,
)
from defectsum.surfaces import (
    SurfaceCurveComplex,
    VertexOrdering,
    barycentric_subdivide,
    default_ordering,
    sphere_octahedron_equator,
    tetrahedron_sphere,
    torus_7vertex,
    torus_grid,
    validate,
)
from defectsum.twisting import (
    TwistingTriple,
    double_orbits,
    from_characters,
    group_2cocycle_zn_zn,
    restrict_from_group_cocycle,
    trivial_triple,
)

__all__ = [
    "BiSet",
    "Character",
    "CyclotomicNumber",
    "FiniteGroup",
    "GaugeData",
    "MoveRecord",
    "SurfaceCurveComplex",
    "TwistingTriple",
    "UnitScalar",
    "VertexOrdering",
    "barycentric_subdivide",
    "characters_of",
    "count_admissible",
    "curve_subdivide_12",
    "curve_weld_21",
    "cyclic_group",
    "cyclotomic_polynomial",
    "default_ordering",
    "direct_product",
    "double_orbits",
    "enumerate_admissible",
    "flip_22",
    "from_characters",
    "group_2cocycle_zn_zn",
    "invariant_twisted",
    "invariant_untwisted",
    "random_flag_like_walk",
    "regular_biset",
    "restrict_from_group_cocycle",
    "sphere_octahedron_equator",
    "subdivide_13",
    "symmetric_group",
    "tetrahedron_sphere",
    "torus_7vertex",
    "torus_grid",
    "trivial_biset",
    "trivial_triple",
    "validate",
    "verify_biset",
    "verify_group",
    "weld_31",
]

__version__ = "0.1.0"
