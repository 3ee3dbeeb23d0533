"""Pure-numpy kernels.

This is the reference implementation; the compiled extension in
``_native.pyx`` mirrors the exact floating-point operation order so that
both backends produce bit-identical potential rasterizations and matching
Weiszfeld trajectories (Gaussian evaluation may differ by an ulp because
numpy's vectorized exp and libm's exp are not the same code).
"""

from __future__ import annotations

import math

import numpy as np


def rasterize_potential_grid(points: np.ndarray, height: int, width: int) -> np.ndarray:
    """Sum of Euclidean distances from every pixel center to each point.

    ``points`` is an (n, 2) float64 array of (row, col) locations.  The
    accumulation order is fixed (point 0 first) so results are reproducible
    bit for bit.
    """
    rows = np.arange(height, dtype=np.float64)[:, None]
    cols = np.arange(width, dtype=np.float64)[None, :]
    out = np.zeros((height, width), dtype=np.float64)
    for k in range(points.shape[0]):
        dr = rows - points[k, 0]
        dc = cols - points[k, 1]
        out += np.sqrt(dr * dr + dc * dc)
    return out


def gaussian_max_grid(centers: np.ndarray, sigma: float, height: int, width: int) -> np.ndarray:
    """Pointwise maximum of unit-peak isotropic Gaussians over the grid.

    Returns all zeros for an empty center set.
    """
    out = np.zeros((height, width), dtype=np.float64)
    if centers.shape[0] == 0:
        return out
    inv = 1.0 / (2.0 * sigma * sigma)
    rows = np.arange(height, dtype=np.float64)[:, None]
    cols = np.arange(width, dtype=np.float64)[None, :]
    for k in range(centers.shape[0]):
        dr = rows - centers[k, 0]
        dc = cols - centers[k, 1]
        g = np.exp(-((dr * dr + dc * dc) * inv))
        np.maximum(out, g, out=out)
    return out


def _potential_scalar(pts: np.ndarray, r: float, c: float) -> float:
    total = 0.0
    for j in range(pts.shape[0]):
        dr = r - pts[j, 0]
        dc = c - pts[j, 1]
        total += math.sqrt(dr * dr + dc * dc)
    return total


def _probe_step(pts: np.ndarray, r: float, c: float, tol: float) -> tuple[bool, float, float]:
    """Axis probes of size tol around (r, c).

    Returns (optimal, row, col): optimal is True when no probe strictly
    decreases the potential; otherwise (row, col) is the best probe point,
    used as a descent hop when the Weiszfeld update stalls near a sharp
    (close-to-vertex) minimum.
    """
    f0 = _potential_scalar(pts, r, c)
    best = f0
    br, bc = r, c
    for pr, pc in ((r + tol, c), (r - tol, c), (r, c + tol), (r, c - tol)):
        f = _potential_scalar(pts, pr, pc)
        if f < best:
            best = f
            br, bc = pr, pc
    return best == f0, br, bc


def _singular_step(pts: np.ndarray, k: int) -> tuple[float, float, bool]:
    """Handle an iterate that landed on (or within tol of) input point k.

    Runs the subgradient optimality test at that point: the point is a
    minimizer when the resultant of unit vectors toward the other points is
    no longer than its own multiplicity.  Otherwise takes the damped
    step away from the point (Vardi-Zhang).  Returns (row, col, at_optimum).
    """
    n = pts.shape[0]
    pr = pts[k, 0]
    pc = pts[k, 1]
    m0 = 0
    res_r = 0.0
    res_c = 0.0
    wsum = 0.0
    tr = 0.0
    tc = 0.0
    for j in range(n):
        dr = pts[j, 0] - pr
        dc = pts[j, 1] - pc
        d = math.sqrt(dr * dr + dc * dc)
        if d == 0.0:
            m0 += 1
            continue
        res_r += dr / d
        res_c += dc / d
        w = 1.0 / d
        wsum += w
        tr += w * pts[j, 0]
        tc += w * pts[j, 1]
    resultant = math.sqrt(res_r * res_r + res_c * res_c)
    if resultant <= m0:
        return pr, pc, True
    tr /= wsum
    tc /= wsum
    a = m0 / resultant
    return (1.0 - a) * tr + a * pr, (1.0 - a) * tc + a * pc, False


def weiszfeld_batch(
    point_sets: np.ndarray, tol: float, max_iter: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Batched geometric-median solves by Weiszfeld iteration.

    ``point_sets`` is (B, n, 2) float64.  Returns (solutions (B, 2),
    iterations (B,), converged (B,) bool).  A draw converges when the
    update step drops below tol AND no probe step of size tol along either
    axis decreases the potential, or when the subgradient test certifies
    an input point as the minimizer.  That certification runs against the
    nearest input point every iteration (it is valid at any distance),
    which sidesteps the notoriously slow crawl toward vertex optima.
    Each draw follows exactly the trajectory a one-at-a-time solve would
    take.
    """
    point_sets = np.ascontiguousarray(point_sets, dtype=np.float64)
    nbatch, npts, _ = point_sets.shape
    # ordered accumulation (not .mean) so trajectories match the compiled
    # kernel bit for bit at any point count
    x = point_sets[:, 0, :].copy()
    for k in range(1, npts):
        x = x + point_sets[:, k, :]
    x /= npts
    iters = np.zeros(nbatch, dtype=np.int64)
    converged = np.zeros(nbatch, dtype=bool)

    # Degenerate all-coincident sets: the common point is the minimizer.
    span = point_sets.max(axis=1) - point_sets.min(axis=1)
    coincident = (span[:, 0] == 0.0) & (span[:, 1] == 0.0)
    if coincident.any():
        x[coincident] = point_sets[coincident, 0, :]
        converged[coincident] = True

    active = ~converged
    tol2 = tol * tol
    for it in range(1, max_iter + 1):
        idx = np.nonzero(active)[0]
        if idx.size == 0:
            break
        pts = point_sets[idx]
        xa = x[idx]
        rows = np.arange(idx.size)
        diff = xa[:, None, :] - pts
        d = np.sqrt((diff * diff).sum(axis=2))
        kmin = d.argmin(axis=1)
        dmin = d[rows, kmin]

        # Subgradient certification at the nearest input point.  Zero-
        # distance entries contribute nothing, exactly like the scalar
        # helper's skip, so the accumulation stays bit-compatible.
        pk = pts[rows, kmin]
        dif_k = pts - pk[:, None, :]
        dk = np.sqrt((dif_k * dif_k).sum(axis=2))
        zero = dk == 0.0
        m0 = zero.sum(axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            unit = dif_k / dk[:, :, None]
        unit[zero] = 0.0
        res = unit[:, 0, :].copy()
        for k in range(1, npts):
            res = res + unit[:, k, :]
        rnorm = np.sqrt(res[:, 0] * res[:, 0] + res[:, 1] * res[:, 1])
        at_opt = rnorm <= m0

        x_new = np.empty_like(xa)
        done = at_opt.copy()
        x_new[at_opt] = pk[at_opt]
        vardi = ~at_opt & (dmin < tol)
        regular = ~at_opt & ~vardi
        if regular.any():
            w = 1.0 / d[regular]
            preg = pts[regular]
            den = w[:, 0].copy()
            num = w[:, 0:1] * preg[:, 0, :]
            for k in range(1, npts):
                den = den + w[:, k]
                num = num + w[:, k : k + 1] * preg[:, k, :]
            x_new[regular] = num / den[:, None]
        for row in np.nonzero(vardi)[0]:
            r, c, _ = _singular_step(pts[row], int(kmin[row]))
            x_new[row, 0] = r
            x_new[row, 1] = c

        delta = x_new - xa
        step2 = delta[:, 0] * delta[:, 0] + delta[:, 1] * delta[:, 1]
        for row in np.nonzero(~done & (step2 < tol2))[0]:
            ok, hop_r, hop_c = _probe_step(pts[row], x_new[row, 0], x_new[row, 1], tol)
            if ok:
                done[row] = True
            else:
                x_new[row, 0] = hop_r
                x_new[row, 1] = hop_c

        x[idx] = x_new
        iters[idx] = it
        if done.any():
            fin = idx[done]
            converged[fin] = True
            active[fin] = False
    return x, iters, converged
