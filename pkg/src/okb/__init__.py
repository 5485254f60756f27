"""Exact Newton-Okounkov bodies for desk-scale models of section rings."""
from __future__ import annotations

from .core import (
    BodyReport,
    CheckResult,
    ValuedSemigroup,
    analyze,
    build_semigroup,
    closure_check,
    homogeneity_check,
    observed_body,
    okounkov_cone,
    segment_inclusion_check,
    simplex,
    simplex_check,
    volume_report,
)
from .errors import (
    FlagError,
    NotDivisibleError,
    OKBError,
    UnboundedError,
    ValidationError,
    ZeroSectionError,
)
from .forms import Form, divide_exact, ord_along, ord_at_point
from .geometry import (
    PolyCone,
    Polytope,
    cone_contains,
    cone_equal,
    cone_from_generators,
    convex_hull,
    polytope_contains,
    polytope_equal,
    polytope_from_inequalities,
    polytope_volume,
    scale_polytope,
    slice_at_height,
)
from .models import AbstractModel, PlaneModel, ToricModel, toric_preset
from .serialize import dumps, render_svg
from .surface import (
    GlobalCone,
    SurfaceData,
    fiber_scaling_check,
    global_cone,
    global_fiber,
    membership_decomposition,
    nef_segment_check,
    ns_build,
    surface_preset,
)
from .valuations import (
    PlaneFlag,
    ToricFlag,
    adapted_basis,
    default_toric_flag,
    plane_valuation,
    toric_valuation,
    valuation_order_compare,
)

__version__ = "0.1.0"
