"""Pure-Python tick kernel: income, simultaneous combat, blocking movement.

Semantics contract shared with the compiled twin (_fastcore.pyx):

* income: every gathering worker adds income_rate to its owner, before combat.
* targeting: each unit with an attack order, plus idle military units
  (standing retaliation), picks, from pre-movement positions, the nearest
  enemy *unit* in range (Chebyshev; ties -> lowest index); if none, the
  nearest enemy *building* in range (distance to the footprint rectangle).
  Damage accumulates into dmg_u/dmg_b and is applied by the caller after
  the kernel, so all strikes this tick are simultaneous.
* movement: units with an attack order and no target, and units with a move
  order, step one cell toward their target point, ascending index order.
  Candidate steps are (sx, sy), (sx, 0), (0, sy); the first empty in-bounds
  cell wins, otherwise the unit stands. A move order within Chebyshev 1 of
  its target resolves to idle.

Everything is int32/int64 arithmetic so both backends match bit for bit.
"""

from __future__ import annotations

import numpy as np

from ..state import ORDER_ATTACK, ORDER_GATHER, ORDER_IDLE, ORDER_MOVE, OCC_EMPTY, UK_WORKER


def sim_tick(u_kind, u_owner, u_x, u_y, u_hp, u_order, u_ox, u_oy,
             b_kind, b_owner, b_x, b_y, b_foot,
             occ_kind, occ_id,
             kind_damage, kind_range, income_rate,
             dmg_u, dmg_b, income_out) -> None:
    nu = len(u_kind)
    nb = len(b_kind)

    # -- income ---------------------------------------------------------------
    gathering = (u_order == ORDER_GATHER) & (u_kind == UK_WORKER)
    for p in (0, 1):
        income_out[p] += income_rate * int(np.count_nonzero(gathering & (u_owner == p)))

    # -- targeting ------------------------------------------------------------
    attackers = np.nonzero((u_order == ORDER_ATTACK)
                           | ((u_order == ORDER_IDLE) & (u_kind != UK_WORKER)))[0]
    attacked = np.zeros(nu, dtype=bool)
    if len(attackers) and nu:
        ax = u_x[attackers][:, None]
        ay = u_y[attackers][:, None]
        cheb = np.maximum(np.abs(ax - u_x[None, :]), np.abs(ay - u_y[None, :]))
        enemy = u_owner[attackers][:, None] != u_owner[None, :]
        in_range = cheb <= kind_range[u_kind[attackers]][:, None]
        valid = enemy & in_range
        key = cheb.astype(np.int64) * 65536 + np.arange(nu, dtype=np.int64)[None, :]
        key = np.where(valid, key, np.int64(1) << 60)
        best = np.argmin(key, axis=1)
        has_unit_target = valid[np.arange(len(attackers)), best]

        for row, i in enumerate(attackers):
            if has_unit_target[row]:
                dmg_u[best[row]] += kind_damage[u_kind[i]]
                attacked[i] = True

        # building targets for attackers without a unit target
        rest = attackers[~has_unit_target]
        if len(rest) and nb:
            rx = u_x[rest][:, None]
            ry = u_y[rest][:, None]
            dx = np.maximum(np.maximum(b_x[None, :] - rx, rx - (b_x[None, :] + b_foot[None, :] - 1)), 0)
            dy = np.maximum(np.maximum(b_y[None, :] - ry, ry - (b_y[None, :] + b_foot[None, :] - 1)), 0)
            dist = np.maximum(dx, dy)
            enemy_b = u_owner[rest][:, None] != b_owner[None, :]
            valid_b = enemy_b & (dist <= kind_range[u_kind[rest]][:, None])
            key_b = dist.astype(np.int64) * 65536 + np.arange(nb, dtype=np.int64)[None, :]
            key_b = np.where(valid_b, key_b, np.int64(1) << 60)
            best_b = np.argmin(key_b, axis=1)
            hit_b = valid_b[np.arange(len(rest)), best_b]
            for row, i in enumerate(rest):
                if hit_b[row]:
                    dmg_b[best_b[row]] += kind_damage[u_kind[i]]
                    attacked[i] = True

    # -- movement ---------------------------------------------------------------
    for i in range(nu):
        order = u_order[i]
        if order == ORDER_MOVE:
            pass
        elif order == ORDER_ATTACK and not attacked[i]:
            pass
        else:
            continue
        x, y = int(u_x[i]), int(u_y[i])
        tx, ty = int(u_ox[i]), int(u_oy[i])
        if order == ORDER_MOVE and max(abs(tx - x), abs(ty - y)) <= 1:
            u_order[i] = ORDER_IDLE
            continue
        if x == tx and y == ty:
            continue
        sx = (tx > x) - (tx < x)
        sy = (ty > y) - (ty < y)
        if sx != 0 and sy != 0:
            cands = ((sx, sy), (sx, 0), (0, sy), (sx, -sy), (-sx, sy))
        elif sx != 0:
            cands = ((sx, 0), (sx, 1), (sx, -1))
        else:
            cands = ((0, sy), (1, sy), (-1, sy))
        side = occ_kind.shape[0]
        for dx, dy in cands:
            nx, ny = x + dx, y + dy
            if nx < 0 or ny < 0 or nx >= side or ny >= side:
                continue
            if occ_kind[nx, ny] == OCC_EMPTY:
                occ_kind[x, y] = OCC_EMPTY
                occ_id[x, y] = -1
                occ_kind[nx, ny] = 3  # OCC_UNIT
                occ_id[nx, ny] = i
                u_x[i] = nx
                u_y[i] = ny
                break
