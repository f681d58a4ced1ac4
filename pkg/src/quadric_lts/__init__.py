"""Lie triple systems and totally geodesic submanifolds of the complex quadric Q^m."""

from .classifier import (
    Classification,
    InadmissibleType,
    LtsType,
    TypeProperties,
    admissible_types,
    check_admissible,
    classify,
    classify_detailed,
    generate,
    generate_with_frame,
    is_subspace_of,
    type_properties,
)
from .lie_model import curvature, is_lie_triple, killing_inner, tangent_lift, tangent_project
from .linalg_core import (
    Conjugation,
    RealSubspace,
    complex_closure,
    hermitian_inner,
    subspace_flags,
    subspace_span,
)
from .quadric_geo import (
    PeriodCase,
    ProjPoint,
    fs_distance,
    geodesic_sample,
    minimal_period,
    minimal_period_oracle,
    on_quadric,
    torus_map,
)
from .roots_weyl import (
    CartanFrame,
    canonical_cartan,
    characteristic_angle,
    decompose_by_roots,
    root_table,
    weyl_group,
)

__version__ = "0.1.0"
