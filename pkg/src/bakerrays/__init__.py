"""Boundary dynamics of the map z + e^-z on its invariant strip: inverse
branches, symbolic itineraries, dynamic rays, landing and periodic boundary
points, the associated degree-two circle map, and a strip renderer.
"""

from .kernels import BACKEND
from .core import (
    RegionLabel,
    classify_region,
    derivative_f,
    evaluate_f,
    evaluate_h,
    expansion_lower_bound,
    model_F,
    model_F_inverse,
    rho_distance,
    semiconjugacy_project,
    semiconjugacy_unproject,
)
from .branches import BranchSolveReport, compose_pullback, inverse_branch
from .symbolic import (
    ConstantTail,
    ItineraryOutcome,
    PeriodicTail,
    ScheduleTail,
    SymbolSequence,
    build_oscillating_sequence,
    classify_sequence,
    format_sequence,
    itinerary,
    parse_sequence,
    shift,
)
from .rays import (
    RayPoint,
    SquareSpec,
    continuity_depth,
    ray_point,
    tail_point,
    trace_ray,
    verify_square_nesting,
)
from .landing import (
    LandingResult,
    PeriodicPoint,
    landing_diagnostic,
    landing_point,
    orbit_radius_bound,
    periodic_point,
)
from .inner import (
    CircleItinerary,
    angle_from_itinerary,
    circle_itinerary,
    circle_itinerary_full,
    eventual_preimages_of_one,
    g_deriv_modulus_on_circle,
    g_eval,
)
from .render import ClassifiedGrid, classify_grid, preimage_curves, write_image, write_polylines_csv

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
