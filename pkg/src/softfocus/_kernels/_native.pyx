# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: hot loops behind the potential-field rasterizer,
the Gaussian compositor, and the batched Weiszfeld solver.

The floating-point operation order mirrors numpy_impl so both backends
agree (bit-identically for the potential rasterizer and the Weiszfeld
trajectories; within an ulp for exp).  Compiled with -ffp-contract=off
so no fused multiply-add changes the rounding.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, sqrt

cnp.import_array()


def rasterize_potential_grid(points, int height, int width):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] pts = np.ascontiguousarray(points, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.zeros((height, width), dtype=np.float64)
    cdef Py_ssize_t n = pts.shape[0]
    cdef Py_ssize_t r, c, k
    cdef double dr, dc, s, fr, fc
    for r in range(height):
        fr = <double> r
        for c in range(width):
            fc = <double> c
            s = 0.0
            for k in range(n):
                dr = fr - pts[k, 0]
                dc = fc - pts[k, 1]
                s += sqrt(dr * dr + dc * dc)
            out[r, c] = s
    return out


def gaussian_max_grid(centers, double sigma, int height, int width):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] ctr = np.ascontiguousarray(centers, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.zeros((height, width), dtype=np.float64)
    cdef Py_ssize_t n = ctr.shape[0]
    if n == 0:
        return out
    cdef double inv = 1.0 / (2.0 * sigma * sigma)
    cdef Py_ssize_t r, c, k
    cdef double dr, dc, g, m, fr, fc
    for r in range(height):
        fr = <double> r
        for c in range(width):
            fc = <double> c
            m = 0.0
            for k in range(n):
                dr = fr - ctr[k, 0]
                dc = fc - ctr[k, 1]
                g = exp(-((dr * dr + dc * dc) * inv))
                if g > m:
                    m = g
            out[r, c] = m
    return out


cdef double _potential_scalar(double[:, ::1] pts, double r, double c) noexcept nogil:
    cdef Py_ssize_t j
    cdef double dr, dc, total = 0.0
    for j in range(pts.shape[0]):
        dr = r - pts[j, 0]
        dc = c - pts[j, 1]
        total += sqrt(dr * dr + dc * dc)
    return total


cdef bint _probe_step(double[:, ::1] pts, double r, double c, double tol,
                      double* out_r, double* out_c) noexcept nogil:
    # Axis probes of size tol: returns 1 when none strictly decreases the
    # potential, else writes the best probe point (a descent hop used when
    # the update stalls near a sharp close-to-vertex minimum).
    cdef double f0 = _potential_scalar(pts, r, c)
    cdef double best = f0
    cdef double br = r, bc = c
    cdef double f
    f = _potential_scalar(pts, r + tol, c)
    if f < best:
        best = f
        br = r + tol
        bc = c
    f = _potential_scalar(pts, r - tol, c)
    if f < best:
        best = f
        br = r - tol
        bc = c
    f = _potential_scalar(pts, r, c + tol)
    if f < best:
        best = f
        br = r
        bc = c + tol
    f = _potential_scalar(pts, r, c - tol)
    if f < best:
        best = f
        br = r
        bc = c - tol
    if best == f0:
        return 1
    out_r[0] = br
    out_c[0] = bc
    return 0


cdef bint _singular_step(double[:, ::1] pts, Py_ssize_t k, double* out_r, double* out_c) noexcept nogil:
    cdef Py_ssize_t j, n = pts.shape[0]
    cdef double pr = pts[k, 0]
    cdef double pc = pts[k, 1]
    cdef long m0 = 0
    cdef double res_r = 0.0, res_c = 0.0, wsum = 0.0, tr = 0.0, tc = 0.0
    cdef double dr, dc, d, w, resultant, a
    for j in range(n):
        dr = pts[j, 0] - pr
        dc = pts[j, 1] - pc
        d = sqrt(dr * dr + dc * dc)
        if d == 0.0:
            m0 += 1
            continue
        res_r += dr / d
        res_c += dc / d
        w = 1.0 / d
        wsum += w
        tr += w * pts[j, 0]
        tc += w * pts[j, 1]
    resultant = sqrt(res_r * res_r + res_c * res_c)
    if resultant <= m0:
        out_r[0] = pr
        out_c[0] = pc
        return 1
    tr /= wsum
    tc /= wsum
    a = m0 / resultant
    out_r[0] = (1.0 - a) * tr + a * pr
    out_c[0] = (1.0 - a) * tc + a * pc
    return 0


def weiszfeld_batch(point_sets, double tol, int max_iter):
    cdef cnp.ndarray[cnp.float64_t, ndim=3] psets = np.ascontiguousarray(point_sets, dtype=np.float64)
    cdef Py_ssize_t nbatch = psets.shape[0]
    cdef Py_ssize_t npts = psets.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] x = np.empty((nbatch, 2), dtype=np.float64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] iters = np.zeros(nbatch, dtype=np.int64)
    cdef cnp.ndarray out_conv = np.zeros(nbatch, dtype=bool)
    cdef cnp.uint8_t[::1] conv = out_conv.view(np.uint8)
    cdef double[:, :, ::1] P = psets
    cdef double[:, ::1] xv = x
    cdef cnp.int64_t[::1] itv = iters
    cdef Py_ssize_t b, j, it, kmin
    cdef double tol2 = tol * tol
    cdef double sr, sc, cr, cc, dr, dc, d, dmin, w, wsum, nr, nc, xr, xc, step2
    cdef double hop_r = 0.0, hop_c = 0.0
    cdef bint coincident, at_opt, ok

    with nogil:
        for b in range(nbatch):
            # Mean start; all-coincident sets short-circuit to the point.
            sr = 0.0
            sc = 0.0
            coincident = 1
            for j in range(npts):
                sr += P[b, j, 0]
                sc += P[b, j, 1]
                if P[b, j, 0] != P[b, 0, 0] or P[b, j, 1] != P[b, 0, 1]:
                    coincident = 0
            if coincident:
                xv[b, 0] = P[b, 0, 0]
                xv[b, 1] = P[b, 0, 1]
                conv[b] = 1
                continue
            cr = sr / npts
            cc = sc / npts

            for it in range(1, max_iter + 1):
                kmin = 0
                dmin = -1.0
                for j in range(npts):
                    dr = cr - P[b, j, 0]
                    dc = cc - P[b, j, 1]
                    d = sqrt(dr * dr + dc * dc)
                    if dmin < 0.0 or d < dmin:
                        dmin = d
                        kmin = j
                # certify the nearest input point every iteration: the
                # subgradient test holds at any distance and avoids the
                # slow crawl toward vertex optima
                at_opt = _singular_step(P[b], kmin, &nr, &nc)
                if not at_opt and dmin >= tol:
                    wsum = 0.0
                    nr = 0.0
                    nc = 0.0
                    for j in range(npts):
                        dr = cr - P[b, j, 0]
                        dc = cc - P[b, j, 1]
                        d = sqrt(dr * dr + dc * dc)
                        w = 1.0 / d
                        wsum += w
                        nr += w * P[b, j, 0]
                        nc += w * P[b, j, 1]
                    nr = nr / wsum
                    nc = nc / wsum
                xr = nr - cr
                xc = nc - cc
                step2 = xr * xr + xc * xc
                ok = at_opt
                if not ok and step2 < tol2:
                    ok = _probe_step(P[b], nr, nc, tol, &hop_r, &hop_c)
                    if not ok:
                        nr = hop_r
                        nc = hop_c
                cr = nr
                cc = nc
                itv[b] = it
                if ok:
                    conv[b] = 1
                    break
            xv[b, 0] = cr
            xv[b, 1] = cc
    return x, iters, out_conv
