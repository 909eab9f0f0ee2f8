"""Integer cell-walk kernel for rational orbits on dyadic tables.

The table is rasterised onto square cells of side ``c``; positions are
integers in units of ``c / U`` so that every grid-line crossing of a line of
slope ``a/b`` lands on integer coordinates.  The walk visits one grid-line
crossing per iteration and asks the occupancy grid whether the cell ahead is
inside the table; a wall flips one direction sign, an empty-corner flips
both, and a corner with exactly one empty cell among the three ahead is a
reflex vertex.

The same source is compiled with numba when available; set the environment
variable ``TBILLIARD_NUMBA=0`` to force the pure-Python path.
"""

from __future__ import annotations

import os

import numpy as np

__all__ = [
    "walk",
    "walk_python",
    "NUMBA_ENABLED",
    "STATUS_CAP",
    "STATUS_PERIODIC",
    "STATUS_SINGULAR",
    "STATUS_PINCH",
    "CODE_VERTICAL",
    "CODE_HORIZONTAL",
    "CODE_CORNER",
]

STATUS_CAP = 0
STATUS_PERIODIC = 1
STATUS_SINGULAR = 2
STATUS_PINCH = 4

CODE_VERTICAL = 1  # wall x = const: sx flips
CODE_HORIZONTAL = 2  # wall y = const: sy flips
CODE_CORNER = 3  # convex corner: both flip


def walk_python(occ, U, a, b, X0, Y0, sx0, sy0, cap, out_x, out_y, out_sx, out_sy, out_code, sing):
    """Trace up to ``cap`` collisions; returns ``(status, n_collisions)``.

    ``occ[i, j]`` is 1 for cells inside the table.  ``out_*`` receive the
    collision states (index 0 is the initial state).  On a reflex vertex
    ``sing`` receives its integer coordinates.
    """
    X = X0
    Y = Y0
    sx = sx0
    sy = sy0
    nx = occ.shape[0]
    ny = occ.shape[1]
    out_x[0] = X
    out_y[0] = Y
    out_sx[0] = sx
    out_sy[0] = sy
    out_code[0] = 0
    k = 0
    while k < cap:
        # cell currently being traversed (the one just ahead of the point)
        if sx > 0:
            ix = X // U
            rx = X - ix * U
            dX = U - rx
        else:
            ix = (X - 1) // U
            dX = X - ix * U
        if sy > 0:
            iy = Y // U
            ry = Y - iy * U
            dY = U - ry
        else:
            iy = (Y - 1) // U
            dY = Y - iy * U
        tv = dX * a
        th = dY * b
        if tv < th:
            # next crossing: vertical grid line
            X = X + sx * dX
            Y = Y + sy * (tv // b)
            jx = ix + sx
            if jx < 0 or jx >= nx:
                return STATUS_PINCH, k
            if occ[jx, iy] == 1:
                continue
            sx = -sx
            code = CODE_VERTICAL
        elif th < tv:
            Y = Y + sy * dY
            X = X + sx * (th // a)
            jy = iy + sy
            if jy < 0 or jy >= ny:
                return STATUS_PINCH, k
            if occ[ix, jy] == 1:
                continue
            sy = -sy
            code = CODE_HORIZONTAL
        else:
            X = X + sx * dX
            Y = Y + sy * dY
            jx = ix + sx
            jy = iy + sy
            if jx < 0 or jx >= nx or jy < 0 or jy >= ny:
                return STATUS_PINCH, k
            v_in = occ[jx, iy]
            h_in = occ[ix, jy]
            d_in = occ[jx, jy]
            total = v_in + h_in + d_in
            if total == 3:
                continue
            if total == 2:
                sing[0] = X
                sing[1] = Y
                return STATUS_SINGULAR, k
            if total == 0:
                sx = -sx
                sy = -sy
                code = CODE_CORNER
            elif v_in == 1:
                sy = -sy
                code = CODE_HORIZONTAL
            elif h_in == 1:
                sx = -sx
                code = CODE_VERTICAL
            else:
                return STATUS_PINCH, k
        k += 1
        out_x[k] = X
        out_y[k] = Y
        out_sx[k] = sx
        out_sy[k] = sy
        out_code[k] = code
        if X == X0 and Y == Y0 and sx == sx0 and sy == sy0:
            return STATUS_PERIODIC, k
    return STATUS_CAP, k


def _numba_wanted() -> bool:
    return os.environ.get("TBILLIARD_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")


walk_numba = None
if _numba_wanted():
    try:
        import numba

        walk_numba = numba.njit(cache=True, nogil=True)(walk_python)
    except Exception:  # pragma: no cover - numba missing or broken
        walk_numba = None

NUMBA_ENABLED = walk_numba is not None


def walk(occ, U, a, b, X0, Y0, sx0, sy0, cap, use_numba: bool | None = None):
    """Allocate output buffers and run the selected kernel."""
    if use_numba is None:
        use_numba = NUMBA_ENABLED
    if use_numba and walk_numba is None:
        raise RuntimeError("numba kernel requested but unavailable")
    n = cap + 1
    out_x = np.zeros(n, dtype=np.int64)
    out_y = np.zeros(n, dtype=np.int64)
    out_sx = np.zeros(n, dtype=np.int8)
    out_sy = np.zeros(n, dtype=np.int8)
    out_code = np.zeros(n, dtype=np.int8)
    sing = np.zeros(2, dtype=np.int64)
    fn = walk_numba if use_numba else walk_python
    if use_numba:
        args = (occ, np.int64(U), np.int64(a), np.int64(b), np.int64(X0), np.int64(Y0),
                np.int64(sx0), np.int64(sy0), np.int64(cap))
    else:
        args = (occ, int(U), int(a), int(b), int(X0), int(Y0), int(sx0), int(sy0), int(cap))
    status, k = fn(*args, out_x, out_y, out_sx, out_sy, out_code, sing)
    m = int(k) + 1
    return (
        int(status),
        out_x[:m].copy(),
        out_y[:m].copy(),
        out_sx[:m].copy(),
        out_sy[:m].copy(),
        out_code[:m].copy(),
        (int(sing[0]), int(sing[1])),
    )
