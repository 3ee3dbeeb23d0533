import numpy as np
import pytest


def ellipse_mask(dims, center, semi_axes) -> np.ndarray:
    """Axis-aligned filled ellipse: ((r-cr)/a)^2 + ((c-cc)/b)^2 <= 1."""
    height, width = dims
    cr, cc = center
    a, b = semi_axes
    rr = np.arange(height)[:, None] - cr
    cc_ = np.arange(width)[None, :] - cc
    return (rr / a) ** 2 + (cc_ / b) ** 2 <= 1.0


def flood_fill_components(mask) -> list[list[tuple[int, int]]]:
    """Independent 8-connected labeling oracle: stack-based flood fill.

    Returns pixel lists (raster order within each component), components
    ordered by first pixel raster position.
    """
    mask = np.asarray(mask, dtype=bool)
    height, width = mask.shape
    seen = np.zeros_like(mask)
    comps = []
    for r0 in range(height):
        for c0 in range(width):
            if not mask[r0, c0] or seen[r0, c0]:
                continue
            queue = [(r0, c0)]
            seen[r0, c0] = True
            pixels = []
            while queue:
                r, c = queue.pop()
                pixels.append((r, c))
                for dr in (-1, 0, 1):
                    for dc in (-1, 0, 1):
                        rr, cc = r + dr, c + dc
                        if 0 <= rr < height and 0 <= cc < width and mask[rr, cc] and not seen[rr, cc]:
                            seen[rr, cc] = True
                            queue.append((rr, cc))
            pixels.sort()
            comps.append(pixels)
    return comps


@pytest.fixture
def square_eps():
    return np.array([(0.0, 0.0), (0.0, 10.0), (10.0, 0.0), (10.0, 10.0)])
