"""Length-spectrum metrics on Teichmueller spaces of surfaces with boundary."""

from .estimator import LengthSpectrumTransformer, chebyshev_distances
from .exceptions import TeichspecError
from .geometry import (
    HypStructure,
    ThickPartSpec,
    arc_length,
    build_holonomy,
    curve_length,
    double_structure,
    in_thick_part,
)
from .spectrum import (
    K_ratio,
    MetricEstimate,
    comparison_experiment,
    companion_curve,
    convergence_study,
    d_bar,
    d_double,
    d_L,
    d_weak,
    delta_L,
    ratio_sup,
)
from .surface import (
    ArcClass,
    CurveClass,
    SurfaceType,
    default_pants_decomposition,
    double,
    double_arc,
    enumerate_arcs,
    enumerate_curves,
    is_simple,
)

__version__ = "0.1.0"
