"""Soft-focus guidance fields from extreme points and corrective clicks.

Encodes user clicks into a smooth [0, 1] guidance map built on a
multi-focal (n-ellipse) potential field, and ships the simulation,
robustness, and session-evaluation tooling around it.
"""

__version__ = "0.1.0"

from ._kernels import BACKEND
from .clicksim import (
    CorrectiveClick,
    Rng,
    connected_components,
    extract_extreme_points,
    perturb_points,
    sample_corrective_click,
    select_three_points,
)
from .encoder import (
    ClickSet,
    SFGParams,
    apply_corrective_clicks,
    bounding_box,
    compose_extreme_points,
    encode,
    postprocess_potential,
)
from .errors import (
    ConvergenceError,
    DegenerateFieldError,
    EmptyMaskError,
    FormatError,
    SoftFocusError,
)
from .geometry import (
    BoundingBox,
    focal_point,
    focal_point_batch,
    gaussian_value,
    potential_value,
    rasterize_gaussians,
    rasterize_potential,
)
from .robustness import (
    RobustnessDraw,
    RobustnessReport,
    default_configurations,
    export_density,
    run_robustness,
)
from .session import (
    ClicksAtIoUSummary,
    OracleSegmenter,
    SessionProtocol,
    SessionRecord,
    SessionStep,
    ThresholdSegmenter,
    clicks_at_iou,
    iou,
    run_session,
)

__all__ = [
    "BACKEND",
    "__version__",
    "BoundingBox",
    "ClickSet",
    "ClicksAtIoUSummary",
    "ConvergenceError",
    "CorrectiveClick",
    "DegenerateFieldError",
    "EmptyMaskError",
    "FormatError",
    "OracleSegmenter",
    "RobustnessDraw",
    "RobustnessReport",
    "Rng",
    "SFGParams",
    "SessionProtocol",
    "SessionRecord",
    "SessionStep",
    "SoftFocusError",
    "ThresholdSegmenter",
    "apply_corrective_clicks",
    "bounding_box",
    "clicks_at_iou",
    "compose_extreme_points",
    "connected_components",
    "default_configurations",
    "encode",
    "export_density",
    "extract_extreme_points",
    "focal_point",
    "focal_point_batch",
    "gaussian_value",
    "iou",
    "perturb_points",
    "postprocess_potential",
    "potential_value",
    "rasterize_gaussians",
    "rasterize_potential",
    "run_robustness",
    "run_session",
    "sample_corrective_click",
    "select_three_points",
]
