# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled tick kernel. Semantics contract documented in reference.py;
the two implementations must stay bit-identical."""

import numpy as np

cimport cython
from libc.stdlib cimport malloc, free

DEF ORDER_IDLE = 0
DEF ORDER_GATHER = 1
DEF ORDER_ATTACK = 2
DEF ORDER_MOVE = 3
DEF OCC_EMPTY = 0
DEF OCC_UNIT = 3
DEF UK_WORKER = 0


cdef inline int _iabs(int v) nogil:
    return -v if v < 0 else v

cdef inline int _imax(int a, int b) nogil:
    return a if a > b else b

cdef inline int _sign(int v) nogil:
    if v > 0:
        return 1
    if v < 0:
        return -1
    return 0


def sim_tick(int[:] u_kind, int[:] u_owner, int[:] u_x, int[:] u_y,
             int[:] u_hp, int[:] u_order, int[:] u_ox, int[:] u_oy,
             int[:] b_kind, int[:] b_owner, int[:] b_x, int[:] b_y,
             int[:] b_foot,
             unsigned char[:, :] occ_kind, int[:, :] occ_id,
             int[:] kind_damage, int[:] kind_range, int income_rate,
             int[:] dmg_u, int[:] dmg_b, long long[:] income_out):
    cdef int nu = u_kind.shape[0]
    cdef int nb = b_kind.shape[0]
    cdef int side = occ_kind.shape[0]
    cdef int i, j, k, d, r, best_d, best_j, x, y, tx, ty, sx, sy
    cdef int dx, dy, nx, ny, c, cdx, cdy, own, ncand
    cdef int cand_x[5]
    cdef int cand_y[5]
    cdef char *attacked = <char *> malloc(nu if nu > 0 else 1)
    if attacked == NULL:
        raise MemoryError()

    try:
        # income
        for i in range(nu):
            attacked[i] = 0
            if u_order[i] == ORDER_GATHER and u_kind[i] == UK_WORKER:
                income_out[u_owner[i]] += income_rate

        # targeting (pre-movement positions; idle military retaliates),
        # damage accumulated for simultaneous application by the caller
        for i in range(nu):
            if u_order[i] != ORDER_ATTACK and not (
                    u_order[i] == ORDER_IDLE and u_kind[i] != UK_WORKER):
                continue
            own = u_owner[i]
            r = kind_range[u_kind[i]]
            x = u_x[i]
            y = u_y[i]
            best_d = 1 << 29
            best_j = -1
            for j in range(nu):
                if u_owner[j] == own:
                    continue
                d = _imax(_iabs(x - u_x[j]), _iabs(y - u_y[j]))
                if d <= r and d < best_d:
                    best_d = d
                    best_j = j
            if best_j >= 0:
                dmg_u[best_j] += kind_damage[u_kind[i]]
                attacked[i] = 1
                continue
            best_d = 1 << 29
            best_j = -1
            for k in range(nb):
                if b_owner[k] == own:
                    continue
                cdx = _imax(_imax(b_x[k] - x, x - (b_x[k] + b_foot[k] - 1)), 0)
                cdy = _imax(_imax(b_y[k] - y, y - (b_y[k] + b_foot[k] - 1)), 0)
                d = _imax(cdx, cdy)
                if d <= r and d < best_d:
                    best_d = d
                    best_j = k
            if best_j >= 0:
                dmg_b[best_j] += kind_damage[u_kind[i]]
                attacked[i] = 1

        # movement, ascending index; blocked by anything occupying the cell
        for i in range(nu):
            if u_order[i] == ORDER_MOVE:
                pass
            elif u_order[i] == ORDER_ATTACK and attacked[i] == 0:
                pass
            else:
                continue
            x = u_x[i]
            y = u_y[i]
            tx = u_ox[i]
            ty = u_oy[i]
            if u_order[i] == ORDER_MOVE and _imax(_iabs(tx - x), _iabs(ty - y)) <= 1:
                u_order[i] = ORDER_IDLE
                continue
            if x == tx and y == ty:
                continue
            sx = _sign(tx - x)
            sy = _sign(ty - y)
            if sx != 0 and sy != 0:
                ncand = 5
                cand_x[0] = sx; cand_y[0] = sy
                cand_x[1] = sx; cand_y[1] = 0
                cand_x[2] = 0;  cand_y[2] = sy
                cand_x[3] = sx; cand_y[3] = -sy
                cand_x[4] = -sx; cand_y[4] = sy
            elif sx != 0:
                ncand = 3
                cand_x[0] = sx; cand_y[0] = 0
                cand_x[1] = sx; cand_y[1] = 1
                cand_x[2] = sx; cand_y[2] = -1
            else:
                ncand = 3
                cand_x[0] = 0;  cand_y[0] = sy
                cand_x[1] = 1;  cand_y[1] = sy
                cand_x[2] = -1; cand_y[2] = sy
            for c in range(ncand):
                dx = cand_x[c]
                dy = cand_y[c]
                nx = x + dx
                ny = y + dy
                if nx < 0 or ny < 0 or nx >= side or ny >= side:
                    continue
                if occ_kind[nx, ny] == OCC_EMPTY:
                    occ_kind[x, y] = OCC_EMPTY
                    occ_id[x, y] = -1
                    occ_kind[nx, ny] = OCC_UNIT
                    occ_id[nx, ny] = i
                    u_x[i] = nx
                    u_y[i] = ny
                    break
    finally:
        free(attacked)
