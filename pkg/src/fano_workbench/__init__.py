"""Exact-arithmetic workbench for linear subspaces of hypersurfaces.

Census of k-planes over prime fields, local Fano-fiber equations and tangent
diagnostics, normal-bundle splitting types of lines, residual-hypersurface
unirationality samplers, and the closed-form threshold battery.  Everything
is exact: prime-field integers and rationals, no floating point in any
result.
"""

from .bounds import binom_bound_check, k0, n0, threshold_report
from .curves import (
    RationalCurve,
    SplittingType,
    expected_dim_curves,
    h0_twisted_tangent,
    is_free,
    normal_bundle_splitting,
)
from .expansion import (
    PlaneExpansion,
    PointExpansion,
    TangentDiagnostics,
    expand_at_plane,
    expand_at_point,
    is_downward,
    linear_diagnostics,
    tangency_locus,
)
from .fano import (
    DimensionEstimate,
    FanoFiber,
    PlaneCensus,
    dimension_estimate,
    enumerate_kplanes,
    expected_dims,
    fano_fiber,
    tangent_dim,
)
from .fields import GF, QQ, FieldSpec
from .linalg import ExactMatrix, nullspace_rank
from .poly import (
    HomogeneousForm,
    partial_derivatives,
    poly_eval,
    poly_parse,
    poly_render,
    poly_substitute,
)
from .unirational import (
    BoundarySeries,
    QuadricParam,
    ResidualDatum,
    TowerSampleReport,
    basepoint_free_check,
    bertini_strata,
    boundary_series,
    quadric_param,
    reduction_step,
    residual,
    unirational_sample,
)
from .varieties import (
    Hypersurface,
    KPlane,
    SingularReport,
    contains,
    example_hypersurface,
    fermat,
    hypersurface_from_json,
    hypersurface_to_json,
    load_hypersurface,
    random_smooth,
    save_hypersurface,
    singular_search,
)

__version__ = "0.1.0"
