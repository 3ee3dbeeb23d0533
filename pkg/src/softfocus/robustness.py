"""Monte-Carlo robustness experiment: perturb extreme points with uniform
noise and measure how much the field's focal point moves compared to the
injected annotation error.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .clicksim import Rng, perturb_points
from .errors import ConvergenceError
from .geometry import as_points, focal_point, focal_point_batch

EXPORT_COLUMNS = ("config_id", "draw", "annotation_error_px", "focal_perturbation_px")

FOCAL_TOL_PX = 1e-3  # sub-pixel focal solves; mean perturbations are a few px

_DEFAULT_CONFIG_SEED = 1729
_DEFAULT_MIN_SPACING_PX = 50.0
_DEFAULT_EDGE_MARGIN_PX = 32.0


@dataclass(frozen=True)
class RobustnessDraw:
    """One Monte-Carlo draw: injected error vs induced focal movement."""

    config_id: str
    draw_index: int
    annotation_error: float
    focal_perturbation: float


@dataclass(frozen=True)
class RobustnessReport:
    """Aggregate of all draws for one extreme-point configuration."""

    config_id: str
    draws: tuple[RobustnessDraw, ...]
    mean_annotation_error: float
    mean_focal_perturbation: float
    attenuation_ratio: float


def run_robustness(
    extreme_points,
    n_draws: int,
    magnitude: float,
    rng: Rng,
    config_id: str = "config",
    tol: float = FOCAL_TOL_PX,
    max_iter: int = 5000,
) -> RobustnessReport:
    """Perturb all 4 extreme points per draw and track the focal point.

    Each draw offsets every coordinate by U[-magnitude, +magnitude] from
    its own substream (seed, draw index), so results are independent of
    execution order.  Annotation error is the sum over the 4 points of the
    per-point Euclidean displacement; focal perturbation is the distance
    between the original and perturbed focal points.
    """
    pts = as_points(extreme_points)
    if pts.shape[0] != 4:
        raise ValueError(f"expected exactly 4 extreme points, got {pts.shape[0]}")
    if n_draws < 1:
        raise ValueError(f"n_draws must be >= 1, got {n_draws}")
    if magnitude < 0:
        raise ValueError(f"magnitude must be >= 0, got {magnitude}")

    origin = focal_point(pts, tol=tol, max_iter=max_iter)

    perturbed = np.empty((n_draws, 4, 2), dtype=np.float64)
    for i in range(n_draws):
        perturbed[i] = perturb_points(pts, magnitude, rng.child(i))
    offsets = perturbed - pts[None, :, :]

    solutions, iterations, converged = focal_point_batch(perturbed, tol=tol, max_iter=max_iter)
    if not converged.all():
        bad = int(np.nonzero(~converged)[0][0])
        raise ConvergenceError(
            f"focal point for draw {bad} did not converge within {max_iter} iterations",
            best=solutions[bad].copy(),
            iterations=int(iterations[bad]),
        )

    annotation_error = np.sqrt((offsets * offsets).sum(axis=2)).sum(axis=1)
    focal_perturbation = np.sqrt(((solutions - origin[None, :]) ** 2).sum(axis=1))

    draws = tuple(
        RobustnessDraw(
            config_id=config_id,
            draw_index=i,
            annotation_error=float(annotation_error[i]),
            focal_perturbation=float(focal_perturbation[i]),
        )
        for i in range(n_draws)
    )
    mean_ann = float(annotation_error.mean())
    mean_focal = float(focal_perturbation.mean())
    ratio = mean_focal / mean_ann if mean_ann > 0 else 0.0
    return RobustnessReport(
        config_id=config_id,
        draws=draws,
        mean_annotation_error=mean_ann,
        mean_focal_perturbation=mean_focal,
        attenuation_ratio=ratio,
    )


def export_density(report: RobustnessReport) -> list[tuple[str, int, float, float]]:
    """Per-draw rows in EXPORT_COLUMNS order, for the CSV writer."""
    if not report.draws:
        raise ValueError("report has no draws to export")
    return [
        (d.config_id, d.draw_index, d.annotation_error, d.focal_perturbation)
        for d in report.draws
    ]


def default_configurations(dims=(512, 512)) -> list[tuple[str, np.ndarray]]:
    """The built-in 4-point configurations used by the CLI.

    One canonical square plus 20 seeded extreme-point-like configurations:
    top/bottom/left/right points on the sides of a random box, the way
    extreme points of an object mask are structured (unconstrained random
    quadruples can be nearly collinear, which no mask produces).  All
    configurations keep pairwise spacing of at least 50 px and stay away
    from the grid edge so +-10 px noise remains inside.
    """
    height, width = dims
    margin = _DEFAULT_EDGE_MARGIN_PX
    configs: list[tuple[str, np.ndarray]] = []
    side = 0.586 * min(height, width)  # square roughly centered, well inside
    r0 = (height - side) / 2.0
    c0 = (width - side) / 2.0
    square = np.array(
        [[r0, c0], [r0, c0 + side], [r0 + side, c0], [r0 + side, c0 + side]]
    )
    configs.append(("square", np.floor(square)))

    rng = Rng(_DEFAULT_CONFIG_SEED)
    lo_r, hi_r = margin, 0.37 * height
    lo_c, hi_c = margin, 0.37 * width
    for k in range(20):
        gen = rng.child(k).generator()
        while True:
            r_min = gen.uniform(lo_r, hi_r)
            r_max = gen.uniform(height - 1 - hi_r, height - 1 - lo_r)
            c_min = gen.uniform(lo_c, hi_c)
            c_max = gen.uniform(width - 1 - hi_c, width - 1 - lo_c)
            pts = np.array(
                [
                    (r_min, gen.uniform(c_min, c_max)),  # top
                    (r_max, gen.uniform(c_min, c_max)),  # bottom
                    (gen.uniform(r_min, r_max), c_min),  # left
                    (gen.uniform(r_min, r_max), c_max),  # right
                ]
            )
            d2min = np.inf
            for i in range(4):
                for j in range(i + 1, 4):
                    d2 = ((pts[i] - pts[j]) ** 2).sum()
                    d2min = min(d2min, d2)
            if d2min >= _DEFAULT_MIN_SPACING_PX**2:
                break
        configs.append((f"ep-{k:02d}", pts))
    return configs
