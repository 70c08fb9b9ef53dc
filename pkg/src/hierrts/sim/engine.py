"""Deterministic game engine: seeded reset, one-tick advance, outcome.

Tick order: apply both players' commands (player 0 first), then the kernel
(income, simultaneous combat, movement), then damage application, deaths,
construction/production timers, supply/score bookkeeping, terminal check.
Illegal commands become recorded no-ops.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..config import SimConfig
from . import actions as A
from .kernels import sim_tick
from .placement import placement_legal_at
from .state import (BK_BASE, BK_PRODUCTION, BK_SUPPLY, BK_TECH,
                    BUILDING_KIND_CODE, BUILDING_KIND_NAMES, GameState,
                    OCC_BUILDING, OCC_EMPTY, OCC_MINERAL, OCC_UNIT,
                    ORDER_ATTACK, ORDER_GATHER, ORDER_IDLE, ORDER_MOVE,
                    UK_MELEE, UK_RANGED, UK_WORKER, UNIT_KIND_CODE,
                    UNIT_KIND_NAMES)


class SimError(ValueError):
    """Contract violations that are errors (not in-game rejections)."""


@dataclass
class StepEvents:
    accepted: tuple[bool, bool] = (True, True)
    symbols: tuple[str | None, str | None] = (None, None)
    income: tuple[int, int] = (0, 0)
    kill_value: tuple[int, int] = (0, 0)       # enemy value this player destroyed
    produced_value: tuple[int, int] = (0, 0)   # own value completed this tick
    units_lost: tuple[int, int] = (0, 0)
    terminal: bool = False
    winner: int = -1


@dataclass
class Outcome:
    result: tuple[str, str]           # per player: "win" | "tie" | "loss"
    terminal_tick: int
    reward: tuple[int, int]           # ternary +1 / 0 / -1


def _kind_tables(cfg: SimConfig) -> tuple[np.ndarray, np.ndarray]:
    cached = getattr(cfg, "_kind_tables", None)
    if cached is None:
        dmg = np.array([cfg.worker.damage, cfg.melee.damage, cfg.ranged.damage],
                       dtype=np.int32)
        rng_ = np.array([cfg.worker.attack_range, cfg.melee.attack_range,
                         cfg.ranged.attack_range], dtype=np.int32)
        cached = (dmg, rng_)
        cfg._kind_tables = cached
    return cached


def unit_stats(cfg: SimConfig, kind_code: int):
    return getattr(cfg, UNIT_KIND_NAMES[kind_code])


def building_stats(cfg: SimConfig, kind_code: int):
    return getattr(cfg, BUILDING_KIND_NAMES[kind_code])


# ---------------------------------------------------------------------------
# Reset
# ---------------------------------------------------------------------------

def _ring_cells(x: int, y: int, f: int, radius: int, s: int):
    """Cells at Chebyshev distance `radius` from an f x f footprint, row-major."""
    x0, y0 = x - radius, y - radius
    x1, y1 = x + f - 1 + radius, y + f - 1 + radius
    for xx in range(x0, x1 + 1):
        for yy in range(y0, y1 + 1):
            if xx in (x0, x1) or yy in (y0, y1):
                if 0 <= xx < s and 0 <= yy < s:
                    yield xx, yy


def reset(cfg: SimConfig, seed: int, difficulty: int) -> GameState:
    """Symmetric start: per player one base, starting workers on gather,
    mineral patches flanking the base. Spawn corners get seeded jitter."""
    if not 1 <= difficulty <= 7:
        raise SimError(f"difficulty must be in 1..7, got {difficulty}")
    st = GameState.empty(cfg, seed=seed, difficulty=difficulty)
    s = cfg.map_size
    f = cfg.base.footprint
    rng = np.random.default_rng(np.random.PCG64(seed))
    j = rng.integers(0, cfg.spawn_jitter + 1, size=4)

    anchors = [(3 + int(j[0]), 3 + int(j[1])),
               (s - 3 - f - int(j[2]), s - 3 - f - int(j[3]))]
    for p, (ax, ay) in enumerate(anchors):
        # mineral line: a column of patches on the corner side of the base
        px = ax - 2 if p == 0 else ax + f + 1
        ys = range(ay - 1, ay - 1 + cfg.mineral_patches) if p == 0 else \
            range(ay + f - cfg.mineral_patches + 1, ay + f + 1)
        for py in ys:
            if 0 <= px < s and 0 <= py < s:
                st.terrain[px, py] = 1
                st.occ_kind[px, py] = OCC_MINERAL

        st.add_building(BK_BASE, p, ax, ay, cfg.base.hp, build_left=0)
        placed = 0
        for radius in (1, 2):
            for cx, cy in _ring_cells(ax, ay, f, radius, s):
                if placed >= cfg.starting_workers:
                    break
                if st.occ_kind[cx, cy] == OCC_EMPTY:
                    st.add_unit(UK_WORKER, p, cx, cy, cfg.worker.hp, order=ORDER_GATHER)
                    placed += 1
            if placed >= cfg.starting_workers:
                break
        st.players[p].supply_used = cfg.starting_workers * cfg.worker.supply
        st.players[p].supply_cap = min(cfg.base.supply_provided, cfg.supply_max)
    return st


def base_center(state: GameState, player: int) -> tuple[int, int]:
    for i in range(state.n_buildings):
        if state.b_kind[i] == BK_BASE and state.b_owner[i] == player:
            f = state.footprint(BK_BASE)
            return int(state.b_x[i]) + f // 2, int(state.b_y[i]) + f // 2
    return state.size // 2, state.size // 2


# ---------------------------------------------------------------------------
# Command application
# ---------------------------------------------------------------------------

def _select(state: GameState, player: int, x: int, y: int) -> tuple[bool, str | None]:
    s = state.size
    if not (0 <= x < s and 0 <= y < s):
        return False, None
    occ = state.occ_kind[x, y]
    idx = int(state.occ_id[x, y])
    pl = state.players[player]
    if occ == OCC_BUILDING and state.b_owner[idx] == player:
        pl.selection = (int(state.b_id[idx]),)
        return True, "select_" + BUILDING_KIND_NAMES[state.b_kind[idx]]
    if occ == OCC_UNIT and state.u_owner[idx] == player:
        if state.u_kind[idx] == UK_WORKER:
            pl.selection = (int(state.u_id[idx]),)
            return True, "select_worker"
        n = state.n_units
        mil = ((state.u_owner[:n] == player) & (state.u_kind[:n] != UK_WORKER))
        pl.selection = tuple(int(v) for v in np.sort(state.u_id[:n][mil]))
        return True, "select_army"
    return False, None


def _selected_unit_indices(state: GameState, player: int) -> list[int]:
    sel = set(state.players[player].selection)
    if not sel:
        return []
    n = state.n_units
    out = [i for i in range(n)
           if int(state.u_id[i]) in sel and state.u_owner[i] == player]
    return out


def _gather(state: GameState, player: int) -> tuple[bool, str | None]:
    if not state.base_alive(player):
        return False, None
    idxs = [i for i in _selected_unit_indices(state, player)
            if state.u_kind[i] == UK_WORKER]
    if not idxs:
        return False, None
    for i in idxs:
        state.u_order[i] = ORDER_GATHER
        state.u_ox[i] = state.u_x[i]
        state.u_oy[i] = state.u_y[i]
    return True, "gather"


def _build(state: GameState, player: int, kind: str | None,
           x: int | None, y: int | None) -> tuple[bool, str | None]:
    if kind not in (A.SUPPLY, A.PRODUCTION, A.TECH) or x is None or y is None:
        return False, None
    cfg = state.cfg
    stats = getattr(cfg, kind)
    pl = state.players[player]
    workers = [i for i in _selected_unit_indices(state, player)
               if state.u_kind[i] == UK_WORKER]
    if not workers:
        return False, None
    if pl.minerals < stats.cost:
        return False, None
    if kind == A.TECH and state.building_counts(player, completed_only=True)[BK_PRODUCTION] == 0:
        return False, None
    if not placement_legal_at(state, kind, x, y, player):
        return False, None
    pl.minerals -= stats.cost
    pl.spent += stats.cost
    state.add_building(BUILDING_KIND_CODE[kind], player, x, y, stats.hp,
                       build_left=max(1, stats.build_ticks))
    builder = min(workers)
    state.u_order[builder] = ORDER_IDLE
    return True, "build_" + kind


def _train(state: GameState, player: int, kind: str | None) -> tuple[bool, str | None]:
    if kind not in A.UNIT_KINDS:
        return False, None
    pl = state.players[player]
    if len(pl.selection) != 1:
        return False, None
    b = state.building_index_by_id(pl.selection[0])
    if b < 0 or state.b_owner[b] != player or state.b_left[b] != 0:
        return False, None
    if state.b_prod[b] != -1:
        return False, None
    bkind = int(state.b_kind[b])
    if kind == A.WORKER:
        if bkind != BK_BASE:
            return False, None
    else:
        if bkind != BK_PRODUCTION:
            return False, None
        if kind == A.RANGED and state.building_counts(player, completed_only=True)[BK_TECH] == 0:
            return False, None
    stats = getattr(state.cfg, kind)
    if pl.minerals < stats.cost:
        return False, None
    if pl.supply_used + stats.supply > pl.supply_cap:
        return False, None
    pl.minerals -= stats.cost
    pl.spent += stats.cost
    pl.supply_used += stats.supply
    state.b_prod[b] = UNIT_KIND_CODE[kind]
    state.b_prod_left[b] = stats.train_ticks
    return True, "train_" + kind


def _army_order(state: GameState, player: int, x: int | None, y: int | None,
                order: int) -> tuple[bool, str | None]:
    if x is None or y is None:
        return False, None
    s = state.size
    tx, ty = min(max(int(x), 0), s - 1), min(max(int(y), 0), s - 1)
    idxs = [i for i in _selected_unit_indices(state, player)
            if state.u_kind[i] != UK_WORKER]
    if not idxs:
        return False, None
    for i in idxs:
        state.u_order[i] = order
        state.u_ox[i] = tx
        state.u_oy[i] = ty
    return True, "attack" if order == ORDER_ATTACK else "retreat"


def apply_action(state: GameState, player: int, act: A.PrimitiveAction) -> tuple[bool, str | None]:
    v = act.verb
    if v == A.Verb.NOOP:
        return True, "noop"
    if v == A.Verb.SELECT:
        if act.x is None or act.y is None:
            return False, None
        return _select(state, player, int(act.x), int(act.y))
    if v == A.Verb.GATHER:
        return _gather(state, player)
    if v == A.Verb.BUILD:
        return _build(state, player, act.kind, act.x, act.y)
    if v == A.Verb.TRAIN:
        return _train(state, player, act.kind)
    if v == A.Verb.ATTACK:
        return _army_order(state, player, act.x, act.y, ORDER_ATTACK)
    if v == A.Verb.RETREAT:
        return _army_order(state, player, act.x, act.y, ORDER_MOVE)
    return False, None


# ---------------------------------------------------------------------------
# Step
# ---------------------------------------------------------------------------

def _spawn_near(state: GameState, b: int, kind_code: int) -> bool:
    f = state.footprint(state.b_kind[b])
    x, y = int(state.b_x[b]), int(state.b_y[b])
    stats = unit_stats(state.cfg, kind_code)
    for radius in (1, 2, 3):
        for cx, cy in _ring_cells(x, y, f, radius, state.size):
            if state.occ_kind[cx, cy] == OCC_EMPTY:
                order = ORDER_GATHER if kind_code == UK_WORKER else ORDER_IDLE
                state.add_unit(kind_code, int(state.b_owner[b]), cx, cy,
                               stats.hp, order=order)
                return True
    return False


def _remove_dead(state: GameState, dmg_u: np.ndarray, dmg_b: np.ndarray,
                 kills: list[int], lost_units: list[int]) -> bool:
    cfg = state.cfg
    nu, nb = state.n_units, state.n_buildings
    state.u_hp[:nu] -= dmg_u
    state.b_hp[:nb] -= dmg_b
    dead_u = np.nonzero(state.u_hp[:nu] <= 0)[0]
    dead_b = np.nonzero(state.b_hp[:nb] <= 0)[0]
    if len(dead_u) == 0 and len(dead_b) == 0:
        return False

    dead_ids: set[int] = set()
    for i in dead_u:
        owner = int(state.u_owner[i])
        stats = unit_stats(cfg, int(state.u_kind[i]))
        kills[1 - owner] += stats.cost
        lost_units[owner] += 1
        state.players[owner].supply_used -= stats.supply
        dead_ids.add(int(state.u_id[i]))
    for i in dead_b:
        owner = int(state.b_owner[i])
        stats = building_stats(cfg, int(state.b_kind[i]))
        kills[1 - owner] += stats.cost
        if state.b_prod[i] >= 0:  # release supply reserved by in-progress unit
            state.players[owner].supply_used -= unit_stats(cfg, int(state.b_prod[i])).supply
        dead_ids.add(int(state.b_id[i]))

    keep_u = np.ones(nu, dtype=bool)
    keep_u[dead_u] = False
    keep_b = np.ones(nb, dtype=bool)
    keep_b[dead_b] = False
    for name in ("u_id", "u_kind", "u_owner", "u_x", "u_y", "u_hp",
                 "u_order", "u_ox", "u_oy"):
        arr = getattr(state, name)
        arr[: keep_u.sum()] = arr[:nu][keep_u]
    state.n_units = int(keep_u.sum())
    for name in ("b_id", "b_kind", "b_owner", "b_x", "b_y", "b_hp",
                 "b_left", "b_prod", "b_prod_left", "b_foot"):
        arr = getattr(state, name)
        arr[: keep_b.sum()] = arr[:nb][keep_b]
    state.n_buildings = int(keep_b.sum())

    for p in state.players:
        if dead_ids & set(p.selection):
            p.selection = tuple(i for i in p.selection if i not in dead_ids)
    state.rebuild_occupancy()
    return True


def _supply_table(cfg: SimConfig) -> np.ndarray:
    cached = getattr(cfg, "_supply_table", None)
    if cached is None:
        cached = np.array([cfg.base.supply_provided, cfg.supply.supply_provided,
                           cfg.production.supply_provided, cfg.tech.supply_provided],
                          dtype=np.int64)
        cfg._supply_table = cached
    return cached


def _recompute_supply_cap(state: GameState) -> None:
    cfg = state.cfg
    table = _supply_table(cfg)
    nb = state.n_buildings
    done = state.b_left[:nb] == 0
    for p in (0, 1):
        mask = done & (state.b_owner[:nb] == p)
        cap = int(table[state.b_kind[:nb][mask]].sum())
        state.players[p].supply_cap = min(cap, cfg.supply_max)


def step(state: GameState, a0: A.PrimitiveAction, a1: A.PrimitiveAction) -> tuple[GameState, StepEvents]:
    """Advance one tick in place; returns (state, events).

    Raises SimError when called on a terminal state.
    """
    if state.terminal:
        raise SimError("cannot step a terminal state")
    cfg = state.cfg
    acc0, sym0 = apply_action(state, 0, a0)
    acc1, sym1 = apply_action(state, 1, a1)

    nu, nb = state.n_units, state.n_buildings
    dmg_u = np.zeros(nu, dtype=np.int32)
    dmg_b = np.zeros(nb, dtype=np.int32)
    income = np.zeros(2, dtype=np.int64)
    kd, kr = _kind_tables(cfg)
    foot = state.b_foot[:nb]
    sim_tick(state.u_kind[:nu], state.u_owner[:nu], state.u_x[:nu], state.u_y[:nu],
             state.u_hp[:nu], state.u_order[:nu], state.u_ox[:nu], state.u_oy[:nu],
             state.b_kind[:nb], state.b_owner[:nb], state.b_x[:nb], state.b_y[:nb],
             foot, state.occ_kind, state.occ_id,
             kd, kr, cfg.income_per_tick, dmg_u, dmg_b, income)

    for p in (0, 1):
        state.players[p].minerals += int(income[p])
        state.players[p].gathered += int(income[p])

    kills = [0, 0]
    lost_units = [0, 0]
    produced = [0, 0]
    structural = _remove_dead(state, dmg_u, dmg_b, kills, lost_units)
    for p in (0, 1):
        state.players[p].kill_value += kills[p]

    # construction / production timers (post-death: destroyed rows are gone)
    for b in range(state.n_buildings):
        if state.b_left[b] > 0:
            state.b_left[b] -= 1
            if state.b_left[b] == 0:
                owner = int(state.b_owner[b])
                value = building_stats(cfg, int(state.b_kind[b])).cost
                state.players[owner].produced_value += value
                produced[owner] += value
                structural = True
        elif state.b_prod[b] >= 0:
            if state.b_prod_left[b] > 0:
                state.b_prod_left[b] -= 1
            if state.b_prod_left[b] == 0:
                kind_code = int(state.b_prod[b])
                if _spawn_near(state, b, kind_code):
                    owner = int(state.b_owner[b])
                    value = unit_stats(cfg, kind_code).cost
                    state.players[owner].produced_value += value
                    produced[owner] += value
                    state.b_prod[b] = -1
                # else: spawn blocked, retry next tick

    if structural:
        _recompute_supply_cap(state)

    state.tick += 1
    alive0, alive1 = state.base_alive(0), state.base_alive(1)
    if not alive0 or not alive1:
        state.terminal = True
        state.winner = 2 if (not alive0 and not alive1) else (0 if alive0 else 1)
    elif state.tick >= state.max_ticks:
        state.terminal = True
        state.winner = 2

    events = StepEvents(
        accepted=(acc0, acc1),
        symbols=(sym0, sym1),
        income=(int(income[0]), int(income[1])),
        kill_value=(kills[0], kills[1]),
        produced_value=(produced[0], produced[1]),
        units_lost=(lost_units[0], lost_units[1]),
        terminal=state.terminal,
        winner=state.winner,
    )
    return state, events


def outcome(state: GameState) -> Outcome | None:
    """Terminal outcome with the ternary end-of-game reward; None if ongoing."""
    if not state.terminal:
        return None
    if state.winner == 2:
        return Outcome(result=("tie", "tie"), terminal_tick=state.tick, reward=(0, 0))
    w = state.winner
    res = ["", ""]
    res[w] = "win"
    res[1 - w] = "loss"
    rew = [0, 0]
    rew[w] = 1
    rew[1 - w] = -1
    return Outcome(result=(res[0], res[1]), terminal_tick=state.tick,
                   reward=(rew[0], rew[1]))
