"""Observation extraction: a fixed-length nonspatial vector plus spatial
planes, every scalar normalized to [0, 1]. Planes are stored quantized
(uint8/255) so trajectory buffers stay small; `planes_float` is the [0, 1]
view. With fog enabled, enemy entities outside sight are zeroed everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .engine import base_center
from .state import (BK_BASE, BK_PRODUCTION, BK_SUPPLY, BK_TECH, GameState,
                    ORDER_GATHER, UK_MELEE, UK_RANGED, UK_WORKER)

# (name, normalizer); normalizer None means the raw value is already in [0,1]
FEATURES: tuple[tuple[str, float | None], ...] = (
    ("minerals", 1000.0),
    ("supply_used", None),        # / supply_max
    ("supply_cap", None),         # / supply_max
    ("worker_count", 24.0),
    ("army_count", 32.0),
    ("melee_count", 32.0),
    ("ranged_count", 32.0),
    ("base_count", 4.0),
    ("supply_building_count", 12.0),
    ("production_count", 8.0),
    ("tech_count", 2.0),
    ("training_worker", 4.0),
    ("training_melee", 8.0),
    ("training_ranged", 8.0),
    ("constructing_buildings", 6.0),
    ("idle_production", 8.0),
    ("army_worker_ratio", 8.0),
    ("tick_fraction", 1.0),
    ("difficulty", 7.0),
    ("score", 20000.0),
    ("minerals_spent", 20000.0),
    ("enemy_army_visible", 32.0),
    ("enemy_worker_visible", 24.0),
    ("enemy_building_visible", 12.0),
    ("gathering_workers", 24.0),
    ("intruders_near_base", 16.0),
)

NONSPATIAL_DIM = len(FEATURES)
FEATURE_INDEX = {name: i for i, (name, _) in enumerate(FEATURES)}

PLANES = ("own_units", "enemy_units", "buildings", "terrain", "selection")
N_PLANES = len(PLANES)

# Feature-index views per network, realizing the state-space split:
# the controller sees a strict global subset, base all nonspatial features,
# battle additionally the spatial planes.
CONTROLLER_VIEW = tuple(FEATURE_INDEX[n] for n in (
    "minerals", "supply_used", "supply_cap", "worker_count", "army_count",
    "tick_fraction", "difficulty", "score", "enemy_army_visible",
    "enemy_building_visible", "intruders_near_base"))
BASE_VIEW = tuple(range(NONSPATIAL_DIM))
BATTLE_VIEW = tuple(range(NONSPATIAL_DIM))


@dataclass
class Observation:
    nonspatial: np.ndarray          # float32 [NONSPATIAL_DIM], each in [0,1]
    planes: np.ndarray              # uint8 [N_PLANES, S, S]

    def planes_float(self) -> np.ndarray:
        return self.planes.astype(np.float32) / 255.0


def _visibility(state: GameState, player: int) -> np.ndarray:
    """Cells within sight radius (Chebyshev) of own units/buildings."""
    s = state.size
    vis = np.zeros((s, s), dtype=bool)
    r = state.cfg.sight_radius
    for i in range(state.n_units):
        if state.u_owner[i] == player:
            x, y = int(state.u_x[i]), int(state.u_y[i])
            vis[max(0, x - r):x + r + 1, max(0, y - r):y + r + 1] = True
    for i in range(state.n_buildings):
        if state.b_owner[i] == player:
            x, y = int(state.b_x[i]), int(state.b_y[i])
            f = state.footprint(int(state.b_kind[i]))
            vis[max(0, x - r):x + f + r, max(0, y - r):y + f + r] = True
    return vis


def observe(state: GameState, player: int) -> Observation:
    cfg = state.cfg
    enemy = 1 - player
    pl = state.players[player]
    n = state.n_units
    nb = state.n_buildings

    fog = cfg.fog
    vis = _visibility(state, player) if fog else None

    ucnt = state.unit_counts(player)
    bcnt = state.building_counts(player)

    # enemy entities, fog-filtered
    e_units = [i for i in range(n) if state.u_owner[i] == enemy
               and (not fog or vis[state.u_x[i], state.u_y[i]])]
    e_bldgs = [i for i in range(nb) if state.b_owner[i] == enemy
               and (not fog or vis[state.b_x[i], state.b_y[i]])]
    e_army = sum(1 for i in e_units if state.u_kind[i] != UK_WORKER)
    e_workers = len(e_units) - e_army

    training = [0, 0, 0]
    constructing = 0
    idle_production = 0
    for i in range(nb):
        if state.b_owner[i] != player:
            continue
        if state.b_left[i] > 0:
            constructing += 1
        elif state.b_prod[i] >= 0:
            training[int(state.b_prod[i])] += 1
        elif state.b_kind[i] in (BK_BASE, BK_PRODUCTION):
            idle_production += 1

    bx, by = base_center(state, player)
    dr = cfg.base_defense_radius
    intruders = sum(
        1 for i in e_units
        if state.u_kind[i] != UK_WORKER
        and max(abs(int(state.u_x[i]) - bx), abs(int(state.u_y[i]) - by)) <= dr)

    army = int(ucnt[UK_MELEE] + ucnt[UK_RANGED])
    workers = int(ucnt[UK_WORKER])
    gathering = sum(1 for i in range(n)
                    if state.u_owner[i] == player and state.u_order[i] == ORDER_GATHER)

    raw = {
        "minerals": pl.minerals,
        "supply_used": pl.supply_used / cfg.supply_max,
        "supply_cap": pl.supply_cap / cfg.supply_max,
        "worker_count": workers,
        "army_count": army,
        "melee_count": int(ucnt[UK_MELEE]),
        "ranged_count": int(ucnt[UK_RANGED]),
        "base_count": int(bcnt[BK_BASE]),
        "supply_building_count": int(bcnt[BK_SUPPLY]),
        "production_count": int(bcnt[BK_PRODUCTION]),
        "tech_count": int(bcnt[BK_TECH]),
        "training_worker": training[UK_WORKER],
        "training_melee": training[UK_MELEE],
        "training_ranged": training[UK_RANGED],
        "constructing_buildings": constructing,
        "idle_production": idle_production,
        "army_worker_ratio": army / max(workers, 1),
        "tick_fraction": state.tick / state.max_ticks,
        "difficulty": state.difficulty,
        "score": pl.cumulative_score,
        "minerals_spent": pl.spent,
        "enemy_army_visible": e_army,
        "enemy_worker_visible": e_workers,
        "enemy_building_visible": len(e_bldgs),
        "gathering_workers": gathering,
        "intruders_near_base": intruders,
    }
    vec = np.empty(NONSPATIAL_DIM, dtype=np.float32)
    for i, (name, norm) in enumerate(FEATURES):
        v = raw[name] / norm if norm is not None else raw[name]
        vec[i] = min(max(float(v), 0.0), 1.0)

    planes = _build_planes(state, player, e_units, e_bldgs)
    return Observation(nonspatial=vec, planes=planes)


def _build_planes(state: GameState, player: int, e_units: list[int],
                  e_bldgs: list[int]) -> np.ndarray:
    cfg = state.cfg
    s = state.size
    planes = np.zeros((N_PLANES, s, s), dtype=np.uint8)
    max_hp = {UK_WORKER: cfg.worker.hp, UK_MELEE: cfg.melee.hp, UK_RANGED: cfg.ranged.hp}

    for i in range(state.n_units):
        frac = max(0, min(255, int(255 * state.u_hp[i] / max_hp[int(state.u_kind[i])])))
        if state.u_owner[i] == player:
            planes[0, state.u_x[i], state.u_y[i]] = frac
    for i in e_units:
        frac = max(0, min(255, int(255 * state.u_hp[i] / max_hp[int(state.u_kind[i])])))
        planes[1, state.u_x[i], state.u_y[i]] = frac

    for i in range(state.n_buildings):
        own = state.b_owner[i] == player
        if not own and i not in e_bldgs:
            continue
        f = state.footprint(int(state.b_kind[i]))
        x, y = int(state.b_x[i]), int(state.b_y[i])
        val = 255 if not own else (128 if state.b_left[i] == 0 else 64)
        planes[2, x:x + f, y:y + f] = val

    planes[3][state.terrain == 1] = 255

    sel = set(state.players[player].selection)
    if sel:
        for i in range(state.n_units):
            if int(state.u_id[i]) in sel:
                planes[4, state.u_x[i], state.u_y[i]] = 255
        for i in range(state.n_buildings):
            if int(state.b_id[i]) in sel:
                f = state.footprint(int(state.b_kind[i]))
                x, y = int(state.b_x[i]), int(state.b_y[i])
                planes[4, x:x + f, y:y + f] = 255
    return planes
