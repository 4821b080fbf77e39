"""Face and upper-body symmetry measures from 2D landmarks, plus tooling to
evaluate predicted landmarks against ground truth."""

from facesym.geometry import (
    DegenerateGeometryError,
    Line2,
    Vec2,
    dist,
    midpoint,
    perp_cw,
    point_line_dist,
    signed_angle_deg,
    vec,
)
from facesym.landmarks import (
    LandmarkIndex,
    LandmarkSet,
    Point2,
    ValidationReport,
    validate,
)
from facesym.measures import (
    MEASURE_NAMES,
    DegenerateMeasureError,
    SymmetryMeasures,
    compute_all,
    facial_angle,
    gaze_angle,
    habitual_head_deviation,
    orbit_slopes_angle,
    relative_face_size,
    translational_deformity,
)
from facesym.metrics import (
    InsufficientSampleError,
    MeasureSeries,
    MetricBundle,
    RhoBands,
    average_ranks,
    bca,
    classify_rho,
    evaluate_series,
    mae,
    rmse,
    spearman_rho,
)

__version__ = "0.1.0"
