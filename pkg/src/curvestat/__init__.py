"""Ripley's K-function for point patterns and its generalizations to curve
sets: fiber-process K via erosion or Cox sampling, morphological K via
dilation neighborhoods, and currents-based K via reproducing-kernel metrics.
"""

from .errors import (
    CoxSampleError,
    DataFormatError,
    EmptyErosionError,
    EstimationError,
    InvalidInputError,
)
from .geometry import (
    ArcSamples,
    Polyline,
    Window,
    as_polyline,
    ball_intersection_length,
    clip_to_window,
    clipped_length,
    erode_window,
    intersection_length,
    point_to_polyline_distance,
    points_to_polyline_distance,
    polyline_length,
    resample_by_arclength,
)

from .current_k import (
    CurrentRepr,
    KernelSpec,
    current_distance,
    gram_inner,
    kc,
    to_current,
)
from .estimators import (
    CurrentKEstimator,
    FiberKEstimator,
    MorphKEstimator,
    RipleysKEstimator,
    default_radii_grid,
)
from .fiber_k import (
    FiberSet,
    cox_sample,
    estimate_rho,
    kf_direct,
    kf_via_cox,
    pair_association,
)
from .morph_k import CurveSet, dilation_membership, km
from .point_k import (
    EstimateCurve,
    LabeledPointSet,
    csr_reference,
    ripley_k_generic,
    ripley_k_points,
)
from .synth import (
    QuadraticField,
    SeedDistribution,
    gen_curveset,
    gen_points,
    gradient_flow_curve,
    preset_curveset,
)

__version__ = "0.1.0"
