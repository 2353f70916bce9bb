"""Compiled settling kernels.

Each kernel works on one comb per row of its input arrays and reports a
status code per row instead of raising, so batches can be resampled
selectively by the caller.
"""

import numba as nb
import numpy as np

from ._rng import HEIGHTS, stream_key, unit

OK = 0
DEGENERATE = 1
UNSUPPORTED = 2
PIVOT_CAP = 3


@nb.njit(cache=True)
def _line_row(x, h, hull, tol):
    n = x.shape[0]
    m = 0
    for j in range(n):
        while m >= 2:
            a = hull[m - 2]
            b = hull[m - 1]
            if (x[b] - x[a]) * (h[j] - h[a]) - (x[j] - x[a]) * (h[b] - h[a]) >= 0.0:
                m -= 1
            else:
                break
        hull[m] = j
        m += 1
    for k in range(m):
        if abs(x[hull[k]]) <= tol:
            return -1, -1, DEGENERATE
    left = -1
    right = -1
    for k in range(m - 1):
        if x[hull[k]] < 0.0 and x[hull[k + 1]] > 0.0:
            left = hull[k]
            right = hull[k + 1]
            break
    if left < 0:
        return -1, -1, UNSUPPORTED
    xl = x[left]
    hl = h[left]
    slope = (h[right] - hl) / (x[right] - xl)
    for j in range(n):
        if j != left and j != right and h[j] - (hl + slope * (x[j] - xl)) >= -tol:
            return left, right, DEGENERATE
    return left, right, OK


@nb.njit(cache=True)
def settle_line(x, h, tol):
    """Support pair of every row; ``x`` rows must be sorted ascending."""
    rows, n = h.shape
    left = np.empty(rows, np.int64)
    right = np.empty(rows, np.int64)
    status = np.empty(rows, np.int64)
    hull = np.empty(n, np.int64)
    for r in range(rows):
        left[r], right[r], status[r] = _line_row(x[r], h[r], hull, tol)
    return left, right, status


@nb.njit(cache=True)
def _circle_row(cx, sy, h, tol, out):
    n = h.shape[0]
    k = 0
    for j in range(1, n):
        if h[j] > h[k]:
            k = j

    # tilt the horizontal plane through the top tip down towards the centre
    best = np.inf
    m = -1
    for j in range(n):
        if j == k:
            continue
        d = 1.0 - (cx[k] * cx[j] + sy[k] * sy[j])
        if d <= 0.0:
            continue
        t = (h[k] - h[j]) / d
        if t < best:
            best = t
            m = j
    if m < 0:
        return UNSUPPORTED
    c0 = h[k] - best
    ax = best * cx[k]
    ay = best * sy[k]

    e0 = k
    e1 = m
    for _ in range(4 * n):
        # rotate about the contact edge, lowering the plane over the centre
        nx = sy[e0] - sy[e1]
        ny = cx[e1] - cx[e0]
        side = nx * cx[e0] + ny * sy[e0]
        if side < 0.0:
            nx = -nx
            ny = -ny
            side = -side
        if side <= tol:
            return DEGENERATE
        best = np.inf
        q = -1
        for j in range(n):
            if j == e0 or j == e1:
                continue
            g = nx * (cx[j] - cx[e0]) + ny * (sy[j] - sy[e0])
            if g < 0.0:
                s = (c0 + ax * cx[j] + ay * sy[j] - h[j]) / (-g)
                if s < best:
                    best = s
                    q = j
        if q < 0:
            return UNSUPPORTED
        c0 -= best * side
        ax += best * nx
        ay += best * ny

        x0 = cx[e0]
        y0 = sy[e0]
        x1 = cx[e1]
        y1 = sy[e1]
        x2 = cx[q]
        y2 = sy[q]
        area = (x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0)
        l0 = (x1 * y2 - x2 * y1) / area
        l1 = (x2 * y0 - x0 * y2) / area
        l2 = (x0 * y1 - x1 * y0) / area
        lo = min(l0, min(l1, l2))
        if lo > tol:
            for j in range(n):
                if j != e0 and j != e1 and j != q:
                    if c0 + ax * cx[j] + ay * sy[j] - h[j] <= tol:
                        return DEGENERATE
            out[0] = e0
            out[1] = e1
            out[2] = q
            return OK
        if lo >= -tol:
            return DEGENERATE
        # drop the contact lying beyond the violated edge
        if l0 == lo:
            e0 = q
        elif l1 == lo:
            e1 = q
        else:
            return DEGENERATE
    return PIVOT_CAP


@nb.njit(cache=True)
def settle_circle(cx, sy, h, tol):
    """Support triple of every row, indices sorted ascending."""
    rows = h.shape[0]
    idx = np.full((rows, 3), -1, np.int64)
    status = np.empty(rows, np.int64)
    tri = np.empty(3, np.int64)
    for r in range(rows):
        status[r] = _circle_row(cx[r], sy[r], h[r], tol, tri)
        if status[r] == OK:
            idx[r] = np.sort(tri)
    return idx, status


@nb.njit(cache=True)
def count_below(seed, first, count, thresholds):
    """Number of uniform combs whose every tooth stays under ``thresholds``."""
    hits = 0
    n = thresholds.shape[0]
    for t in range(first, first + count):
        key = stream_key(seed, t, 0, HEIGHTS)
        below = True
        for j in range(n):
            if unit(key, j) > thresholds[j]:
                below = False
                break
        if below:
            hits += 1
    return hits
