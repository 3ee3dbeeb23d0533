"""Robot-annotator simulation: extreme-point extraction from masks, noise
injection, three-point selection, error-blob analysis, and corrective-click
sampling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyMaskError
from .geometry import as_points

_EIGHT_CONNECTED = np.ones((3, 3), dtype=bool)
_FOUR_CONNECTED = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=bool)

BOUNDARY_BAND_PX = (15.0, 60.0)  # train-mode sampling band around the mask boundary


@dataclass(frozen=True)
class Rng:
    """Deterministic random source: a seed plus a substream path.

    Generators are PCG64 seeded through numpy's SeedSequence over
    (seed, *path), so the same Rng value always yields the same stream and
    children derived with distinct keys are independent.  Operations that
    consume randomness take an Rng and are pure functions of their inputs
    and this value.
    """

    seed: int
    path: tuple[int, ...] = ()

    def child(self, *keys: int) -> "Rng":
        return Rng(self.seed, self.path + tuple(int(k) for k in keys))

    def generator(self) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(np.random.SeedSequence((self.seed, *self.path))))


@dataclass(frozen=True)
class CorrectiveClick:
    """A simulated corrective click: (row, col) plus polarity FPC or FNC."""

    location: tuple[float, float]
    polarity: str

    def __post_init__(self):
        if self.polarity not in ("FPC", "FNC"):
            raise ValueError(f"polarity must be 'FPC' or 'FNC', got {self.polarity!r}")


def as_mask(mask, name: str = "mask") -> np.ndarray:
    arr = np.asarray(mask)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {arr.shape}")
    return arr.astype(bool)


def _middle(values: np.ndarray) -> int:
    """Lower-median element of a sorted index run."""
    return int(values[(len(values) - 1) // 2])


def extract_extreme_points(mask) -> np.ndarray:
    """Top, bottom, left, right foreground pixels of a mask, in that order.

    Within a tie run (several pixels attaining the extremal coordinate) the
    middle pixel is used, taking the lower median for even runs.
    """
    m = as_mask(mask)
    rows, cols = np.nonzero(m)
    if rows.size == 0:
        raise EmptyMaskError("cannot extract extreme points from an empty mask")
    rmin, rmax = int(rows.min()), int(rows.max())
    cmin, cmax = int(cols.min()), int(cols.max())
    top = (rmin, _middle(np.sort(cols[rows == rmin])))
    bottom = (rmax, _middle(np.sort(cols[rows == rmax])))
    left = (_middle(np.sort(rows[cols == cmin])), cmin)
    right = (_middle(np.sort(rows[cols == cmax])), cmax)
    return np.array([top, bottom, left, right], dtype=np.float64)


def perturb_points(points, magnitude: float, rng: Rng, dims=None) -> np.ndarray:
    """Offset each coordinate independently by U[-magnitude, +magnitude].

    Clips results to the grid when dims=(height, width) is given.
    """
    pts = as_points(points)
    if magnitude < 0:
        raise ValueError(f"magnitude must be >= 0, got {magnitude}")
    if magnitude == 0:
        out = pts.copy()
    else:
        gen = rng.generator()
        out = pts + gen.uniform(-magnitude, magnitude, size=pts.shape)
    if dims is not None:
        height, width = dims
        out[:, 0] = np.clip(out[:, 0], 0.0, height - 1.0)
        out[:, 1] = np.clip(out[:, 1], 0.0, width - 1.0)
    return out


def closest_pair(points) -> tuple[int, int]:
    """Index pair (i < j) with minimal Euclidean distance.

    Ties resolve to the lexicographically smallest index pair.
    """
    pts = as_points(points, min_count=2)
    n = pts.shape[0]
    best = (0, 1)
    best_d2 = np.inf
    for i in range(n):
        for j in range(i + 1, n):
            dr = pts[i, 0] - pts[j, 0]
            dc = pts[i, 1] - pts[j, 1]
            d2 = dr * dr + dc * dc
            if d2 < best_d2:
                best_d2 = d2
                best = (i, j)
    return best


def select_three_points(extreme_points, rng: Rng) -> np.ndarray:
    """Drop one member (chosen at random) of the closest pair of 4 points.

    Models an annotator maximizing coverage with a 3-click budget.
    """
    pts = as_points(extreme_points)
    if pts.shape[0] != 4:
        raise ValueError(f"expected exactly 4 points, got {pts.shape[0]}")
    i, j = closest_pair(pts)
    drop = (i, j)[int(rng.generator().integers(2))]
    return np.delete(pts, drop, axis=0)


@dataclass(frozen=True)
class Component:
    """A connected foreground component: label, size, and pixel list.

    Labels follow the raster order of each component's first pixel; pixels
    are (k, 2) int arrays in raster order.
    """

    label: int
    size: int
    pixels: np.ndarray


def connected_components(mask) -> list[Component]:
    """8-connected components of the foreground, sorted by size descending.

    Equal sizes keep label order, so the output is fully deterministic.
    """
    from scipy import ndimage  # deferred: keeps bare-encode CLI startup lean

    m = as_mask(mask)
    labels, count = ndimage.label(m, structure=_EIGHT_CONNECTED)
    comps = []
    for lbl, slc in enumerate(ndimage.find_objects(labels), start=1):
        if slc is None:
            continue
        local = np.argwhere(labels[slc] == lbl)
        local[:, 0] += slc[0].start
        local[:, 1] += slc[1].start
        comps.append(Component(label=lbl, size=local.shape[0], pixels=local))
    comps.sort(key=lambda comp: (-comp.size, comp.label))
    return comps


def boundary_distance_map(mask) -> np.ndarray:
    """Exact Euclidean distance from every pixel to the mask boundary.

    The boundary is the set of foreground pixels with a 4-neighbor outside
    the foreground (grid edges count as outside).
    """
    from scipy import ndimage  # deferred: keeps bare-encode CLI startup lean

    m = as_mask(mask)
    if not m.any():
        raise EmptyMaskError("mask has no foreground, so no boundary")
    interior = ndimage.binary_erosion(m, structure=_FOUR_CONNECTED, border_value=0)
    boundary = m & ~interior
    return ndimage.distance_transform_edt(~boundary)


def sample_corrective_click(pred, gt, mode: str, rng: Rng) -> CorrectiveClick | None:
    """Sample one corrective click from the largest prediction-error blob.

    False-positive and false-negative error masks are labeled separately;
    the click comes from the largest blob across both (size ties favor the
    false-negative side) with polarity FPC for a false-positive blob and
    FNC for a false-negative one.  Test mode samples uniformly over the
    blob; train mode restricts candidates to blob pixels whose distance to
    the ground-truth boundary lies within BOUNDARY_BAND_PX, falling back
    to the whole blob when that band is empty.  Returns None when the
    prediction already matches the ground truth.
    """
    if mode not in ("test", "train"):
        raise ValueError(f"mode must be 'test' or 'train', got {mode!r}")
    p = as_mask(pred, "pred")
    g = as_mask(gt, "gt")
    if p.shape != g.shape:
        raise ValueError(f"pred {p.shape} and gt {g.shape} dimensions differ")

    fp = p & ~g
    fn = g & ~p
    fp_comps = connected_components(fp) if fp.any() else []
    fn_comps = connected_components(fn) if fn.any() else []
    if not fp_comps and not fn_comps:
        return None

    fp_best = fp_comps[0] if fp_comps else None
    fn_best = fn_comps[0] if fn_comps else None
    if fn_best is not None and (fp_best is None or fn_best.size >= fp_best.size):
        blob, polarity = fn_best, "FNC"
    else:
        blob, polarity = fp_best, "FPC"

    candidates = blob.pixels
    if mode == "train" and g.any():
        dist = boundary_distance_map(g)
        d = dist[candidates[:, 0], candidates[:, 1]]
        lo, hi = BOUNDARY_BAND_PX
        in_band = (d >= lo) & (d <= hi)
        if in_band.any():
            candidates = candidates[in_band]

    pick = candidates[int(rng.generator().integers(candidates.shape[0]))]
    return CorrectiveClick(location=(float(pick[0]), float(pick[1])), polarity=polarity)
