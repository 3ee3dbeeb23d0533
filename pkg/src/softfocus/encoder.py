"""The soft-focus encoding pipeline.

Stages: rasterize the multi-focal potential, invert/normalize and crop it
to the extreme-point bounding box, composite corrective-click Gaussians,
then composite the extreme-point Gaussians.  Every stage returns a fresh
float64 field with values in [0, 1].
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DegenerateFieldError
from .geometry import (
    BoundingBox,
    as_dims,
    as_points,
    rasterize_potential,
    snap_points,
)
from . import _kernels


@dataclass(frozen=True)
class SFGParams:
    """Encoding hyperparameters.

    beta is the decay exponent applied to the inverted potential, sigma
    the width (px) of every click/extreme-point Gaussian, bbox_margin an
    optional dilation of the extreme-point box, and epsilon_floor the
    clamp that keeps the inversion finite when all points coincide with a
    pixel center.
    """

    beta: float = 5.0
    sigma: float = 10.0
    bbox_margin: int = 0
    epsilon_floor: float = 1e-6

    def __post_init__(self):
        if self.beta <= 0:
            raise ValueError(f"beta must be positive, got {self.beta}")
        if self.sigma <= 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if self.bbox_margin < 0:
            raise ValueError(f"bbox_margin must be >= 0, got {self.bbox_margin}")
        if self.epsilon_floor <= 0:
            raise ValueError(f"epsilon_floor must be positive, got {self.epsilon_floor}")


def _click_array(clicks) -> np.ndarray:
    arr = np.asarray(clicks, dtype=np.float64).reshape(-1, 2)
    if arr.shape[0] and not np.isfinite(arr).all():
        raise ValueError("click coordinates must be finite")
    return arr


@dataclass(frozen=True)
class ClickSet:
    """Accumulated corrective clicks, split by polarity.

    fpc: false-positive-corrective clicks, fnc: false-negative-corrective
    clicks; either may be empty.  Treat instances as immutable.
    """

    fpc: np.ndarray = field(default_factory=lambda: np.empty((0, 2)))
    fnc: np.ndarray = field(default_factory=lambda: np.empty((0, 2)))

    def __post_init__(self):
        object.__setattr__(self, "fpc", _click_array(self.fpc))
        object.__setattr__(self, "fnc", _click_array(self.fnc))

    @classmethod
    def empty(cls) -> "ClickSet":
        return cls()

    def __len__(self) -> int:
        return self.fpc.shape[0] + self.fnc.shape[0]

    def add(self, location, polarity: str) -> "ClickSet":
        """New ClickSet with one click appended; polarity is FPC or FNC."""
        loc = np.asarray(location, dtype=np.float64).reshape(1, 2)
        if polarity == "FPC":
            return replace(self, fpc=np.concatenate([self.fpc, loc]))
        if polarity == "FNC":
            return replace(self, fnc=np.concatenate([self.fnc, loc]))
        raise ValueError(f"polarity must be 'FPC' or 'FNC', got {polarity!r}")


def bounding_box(points, margin: int, dims) -> BoundingBox:
    """Tight box over snapped point coordinates, dilated and clipped."""
    snapped = snap_points(as_points(points))
    height, width = as_dims(dims)
    margin = int(margin)
    if margin < 0:
        raise ValueError(f"margin must be >= 0, got {margin}")
    min_row = min(max(int(snapped[:, 0].min()) - margin, 0), height - 1)
    max_row = max(min(int(snapped[:, 0].max()) + margin, height - 1), 0)
    min_col = min(max(int(snapped[:, 1].min()) - margin, 0), width - 1)
    max_col = max(min(int(snapped[:, 1].max()) + margin, width - 1), 0)
    return BoundingBox(min_row, min_col, max_row, max_col)


def postprocess_potential(potential: np.ndarray, bbox: BoundingBox, params: SFGParams) -> np.ndarray:
    """Invert, sharpen, min-max normalize, then crop the potential field.

    Computes (1 / max(potential, epsilon_floor)) ** beta per cell,
    normalizes the result to [0, 1] over the full grid, and zeroes every
    cell outside bbox.  The global maximum (value 1.0) always lies inside
    the box because the potential's minimizer is inside the point hull.
    """
    pot = np.asarray(potential, dtype=np.float64)
    if pot.ndim != 2:
        raise ValueError(f"potential must be a 2-D field, got shape {pot.shape}")
    if (pot < 0).any():
        raise ValueError("potential values must be >= 0")
    f = (1.0 / np.maximum(pot, params.epsilon_floor)) ** params.beta
    fmin = f.min()
    fmax = f.max()
    if fmax == fmin:
        raise DegenerateFieldError(
            "constant potential field cannot be normalized (min == max)"
        )
    normalized = (f - fmin) / (fmax - fmin)
    out = np.zeros_like(normalized)
    rows, cols = bbox.slices
    out[rows, cols] = normalized[rows, cols]
    return out


def _snapped_in_grid(clicks: np.ndarray, shape: tuple[int, int], name: str) -> np.ndarray:
    if clicks.shape[0] == 0:
        return clicks
    snapped = snap_points(clicks).astype(np.float64)
    if (
        (snapped[:, 0] < 0).any()
        or (snapped[:, 0] > shape[0] - 1).any()
        or (snapped[:, 1] < 0).any()
        or (snapped[:, 1] > shape[1] - 1).any()
    ):
        raise ValueError(f"{name} clicks fall outside the grid after snapping")
    return snapped


def apply_corrective_clicks(focus: np.ndarray, clicks: ClickSet, sigma: float) -> np.ndarray:
    """Composite corrective clicks into a [0, 1] focus field.

    False-negative-corrective clicks clamp the field from above with
    1 - g (pointwise min), then false-positive-corrective clicks raise it
    with g (pointwise max), where g is the unit-peak Gaussian map of the
    snapped click locations.  With no clicks the output is a bit-identical
    copy of the input.
    """
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    fld = np.asarray(focus, dtype=np.float64)
    if fld.ndim != 2:
        raise ValueError(f"focus field must be 2-D, got shape {fld.shape}")
    height, width = fld.shape
    fnc = _snapped_in_grid(clicks.fnc, (height, width), "FNC")
    fpc = _snapped_in_grid(clicks.fpc, (height, width), "FPC")
    out = fld.copy()
    if fnc.shape[0]:
        g_fnc = _kernels.gaussian_max_grid(fnc, float(sigma), height, width)
        np.minimum(out, 1.0 - g_fnc, out=out)
    if fpc.shape[0]:
        g_fpc = _kernels.gaussian_max_grid(fpc, float(sigma), height, width)
        np.maximum(out, g_fpc, out=out)
    return out


def compose_extreme_points(focus: np.ndarray, extreme_points, sigma: float) -> np.ndarray:
    """Composite unit-peak Gaussians at the snapped extreme points (max).

    The result equals 1.0 exactly at every snapped extreme point.
    """
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    fld = np.asarray(focus, dtype=np.float64)
    if fld.ndim != 2:
        raise ValueError(f"focus field must be 2-D, got shape {fld.shape}")
    height, width = fld.shape
    eps = snap_points(as_points(extreme_points)).astype(np.float64)
    g = _kernels.gaussian_max_grid(eps, float(sigma), height, width)
    return np.maximum(fld, g)


def encode(extreme_points, clicks: ClickSet | None, params: SFGParams, dims) -> np.ndarray:
    """Full soft-focus encoding for n >= 2 extreme points plus clicks.

    Pipeline: rasterize potential -> invert/normalize/crop ->
    corrective-click compositing -> extreme-point compositing.
    """
    eps = as_points(extreme_points, min_count=2, name="extreme_points")
    if clicks is None:
        clicks = ClickSet.empty()
    height, width = as_dims(dims)
    if eps.shape[0] != np.unique(eps, axis=0).shape[0]:
        warnings.warn("extreme points contain duplicates", stacklevel=2)
    potential = rasterize_potential(eps, (height, width))
    box = bounding_box(eps, params.bbox_margin, (height, width))
    focus = postprocess_potential(potential, box, params)
    focus = apply_corrective_clicks(focus, clicks, params.sigma)
    return compose_extreme_points(focus, eps, params.sigma)
