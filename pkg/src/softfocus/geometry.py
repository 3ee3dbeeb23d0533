"""Geometry primitives: point handling, the multi-focal potential field,
Gaussian peaks, grid rasterization, and the focal-point (geometric median)
solver.

Conventions: coordinates are (row, col) with the origin at the top-left
and pixel centers at integer coordinates.  All arithmetic is float64;
files may downcast on export.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import ConvergenceError


def as_points(points, min_count: int = 1, name: str = "points") -> np.ndarray:
    """Coerce to an (n, 2) float64 array of (row, col) and validate it."""
    arr = np.asarray(points, dtype=np.float64)
    if arr.ndim == 1 and arr.size == 2:
        arr = arr.reshape(1, 2)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(f"{name} must have shape (n, 2), got {arr.shape}")
    if arr.shape[0] < min_count:
        raise ValueError(f"{name} needs at least {min_count} point(s), got {arr.shape[0]}")
    if not np.isfinite(arr).all():
        raise ValueError(f"{name} contains non-finite coordinates")
    return arr


def snap_points(points) -> np.ndarray:
    """Round coordinates to the nearest pixel center (half rounds up)."""
    arr = as_points(points)
    return np.floor(arr + 0.5).astype(np.int64)


def as_dims(dims) -> tuple[int, int]:
    """Validate (height, width) grid dimensions."""
    try:
        height, width = dims
    except (TypeError, ValueError) as exc:
        raise ValueError(f"dims must be a (height, width) pair, got {dims!r}") from exc
    height = int(height)
    width = int(width)
    if height < 1 or width < 1:
        raise ValueError(f"grid dimensions must be positive, got {height}x{width}")
    return height, width


@dataclass(frozen=True)
class BoundingBox:
    """Inclusive pixel bounds, clipped to the grid that produced them."""

    min_row: int
    min_col: int
    max_row: int
    max_col: int

    def __post_init__(self):
        if self.min_row > self.max_row or self.min_col > self.max_col:
            raise ValueError(f"empty bounding box: {self}")

    @property
    def slices(self) -> tuple[slice, slice]:
        return slice(self.min_row, self.max_row + 1), slice(self.min_col, self.max_col + 1)

    def contains(self, row: float, col: float) -> bool:
        return self.min_row <= row <= self.max_row and self.min_col <= col <= self.max_col


def potential_value(points, x) -> float:
    """Sum of Euclidean distances from location x to every point.

    This is the multi-focal ellipse potential: convex in x, zero only when
    all points coincide with x.
    """
    pts = as_points(points)
    xr, xc = float(x[0]), float(x[1])
    if not (math.isfinite(xr) and math.isfinite(xc)):
        raise ValueError("x must be finite")
    total = 0.0
    for k in range(pts.shape[0]):
        dr = xr - pts[k, 0]
        dc = xc - pts[k, 1]
        total += math.sqrt(dr * dr + dc * dc)
    return total


def gaussian_value(centers, sigma: float, x) -> float:
    """Max over centers of a unit-peak isotropic Gaussian at x.

    Returns 0.0 for an empty center set; equals 1.0 exactly at any center.
    """
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    ctr = np.asarray(centers, dtype=np.float64).reshape(-1, 2)
    if ctr.shape[0] == 0:
        return 0.0
    ctr = as_points(ctr, name="centers")
    xr, xc = float(x[0]), float(x[1])
    inv = 1.0 / (2.0 * sigma * sigma)
    best = 0.0
    for k in range(ctr.shape[0]):
        dr = xr - ctr[k, 0]
        dc = xc - ctr[k, 1]
        g = math.exp(-((dr * dr + dc * dc) * inv))
        if g > best:
            best = g
    return best


def rasterize_potential(points, dims) -> np.ndarray:
    """Potential field sampled at every integer pixel center of the grid."""
    pts = as_points(points)
    height, width = as_dims(dims)
    return _kernels.rasterize_potential_grid(pts, height, width)


def rasterize_gaussians(centers, sigma: float, dims) -> np.ndarray:
    """Unit-peak Gaussian max map on the grid; zeros for no centers."""
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    height, width = as_dims(dims)
    ctr = np.asarray(centers, dtype=np.float64).reshape(-1, 2)
    if ctr.shape[0] > 0:
        ctr = as_points(ctr, name="centers")
    return _kernels.gaussian_max_grid(ctr, float(sigma), height, width)


def focal_point(points, tol: float = 1e-6, max_iter: int = 2000) -> np.ndarray:
    """Minimizer of the potential (the geometric median) by Weiszfeld iteration.

    Convergence requires both a sub-tol update step and that no probe step
    of size tol along either axis decreases the potential.  An iterate
    landing within tol of an input point triggers the subgradient
    optimality test there (returning the point exactly when it is the
    minimizer, stepping away otherwise).

    Raises ConvergenceError carrying the best iterate when max_iter is
    exhausted.
    """
    pts = as_points(points)
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    solution, iterations, converged = _kernels.weiszfeld_batch(pts[None, :, :], tol, max_iter)
    if not converged[0]:
        raise ConvergenceError(
            f"focal point did not converge within {max_iter} iterations",
            best=solution[0].copy(),
            iterations=int(iterations[0]),
        )
    return solution[0].copy()


def focal_point_batch(point_sets, tol: float = 1e-6, max_iter: int = 2000):
    """Batched focal points for (B, n, 2) input; see focal_point.

    Returns (solutions, iterations, converged) without raising, so callers
    can decide how to handle stragglers.
    """
    psets = np.asarray(point_sets, dtype=np.float64)
    if psets.ndim != 3 or psets.shape[2] != 2:
        raise ValueError(f"point_sets must have shape (B, n, 2), got {psets.shape}")
    if psets.shape[1] < 1:
        raise ValueError("point_sets needs at least one point per set")
    if not np.isfinite(psets).all():
        raise ValueError("point_sets contains non-finite coordinates")
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    return _kernels.weiszfeld_batch(psets, tol, max_iter)
