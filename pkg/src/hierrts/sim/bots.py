"""Rule policies: the difficulty-1..7 scripted opponent ladder and the
expert bot whose replays feed the macro miner.

Both are pure functions of the game state (placement randomness derives
from the state's seed and tick), so identical states always produce
identical actions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..config import SimConfig
from . import actions as A
from .engine import base_center
from .placement import legal_placements
from .state import (BK_BASE, BK_PRODUCTION, BK_SUPPLY, BK_TECH, GameState,
                    ORDER_ATTACK, ORDER_GATHER, ORDER_IDLE, UK_MELEE,
                    UK_RANGED, UK_WORKER)


@dataclass(frozen=True)
class Knobs:
    """The three difficulty knobs, all non-decreasing in difficulty."""
    worker_target: int
    army_supply_target: int
    attack_period: int


def knobs_for(cfg: SimConfig, difficulty: int) -> Knobs:
    if difficulty not in cfg.knobs:
        raise ValueError(f"difficulty {difficulty} not in knob table")
    return Knobs(*cfg.knobs[difficulty])


@dataclass(frozen=True)
class RuleParams:
    worker_target: int
    army_supply_attack: int      # fielded army supply required to launch a wave
    attack_period: int           # earliest wave tick; re-waves re-arm on strength
    prod_target: int
    build_tech: bool
    army_cap_supply: int
    defend_min_intruders: int = 1
    supply_margin: int = 4
    prefer_ranged: bool = False
    build_radius: int = 9        # buildings placed within this box around home
    allin_offset: int = 250      # all-in starts at max_ticks - offset
    smart: bool = False          # scale production with bank; attack only when
                                 # the massed force matches the visible enemy


def params_from_knobs(k: Knobs) -> RuleParams:
    return RuleParams(
        worker_target=k.worker_target,
        army_supply_attack=k.army_supply_target,
        attack_period=k.attack_period,
        prod_target=max(1, k.army_supply_target // 10),
        build_tech=k.army_supply_target >= 24,
        army_cap_supply=2 * k.army_supply_target,
    )


EXPERT_PARAMS = RuleParams(
    worker_target=10,
    army_supply_attack=10,
    attack_period=0,             # expert attacks on army strength, not a clock
    prod_target=2,
    build_tech=True,
    army_cap_supply=10 ** 9,
    defend_min_intruders=3,
    prefer_ranged=True,
    allin_offset=200,
    smart=True,
)


def scripted_opponent(state: GameState, difficulty: int | None = None,
                      player: int = 1) -> A.PrimitiveAction:
    d = state.difficulty if difficulty is None else difficulty
    return _rule_policy(state, player, params_from_knobs(knobs_for(state.cfg, d)))


def expert_bot(state: GameState, player: int = 0) -> A.PrimitiveAction:
    return _rule_policy(state, player, EXPERT_PARAMS)


# ---------------------------------------------------------------------------
# Shared rule machinery
# ---------------------------------------------------------------------------

def _unit_supply_table(cfg: SimConfig) -> np.ndarray:
    cached = getattr(cfg, "_unit_supply", None)
    if cached is None:
        cached = np.array([cfg.worker.supply, cfg.melee.supply, cfg.ranged.supply],
                          dtype=np.int64)
        cfg._unit_supply = cached
    return cached


class _Ctx:
    """Per-call vectorized views shared by all rules."""

    def __init__(self, state: GameState, player: int):
        self.state = state
        self.player = player
        n = state.n_units
        self.uk = state.u_kind[:n]
        self.uo = state.u_owner[:n]
        self.ux = state.u_x[:n]
        self.uy = state.u_y[:n]
        self.uord = state.u_order[:n]
        self.uox = state.u_ox[:n]
        self.uoy = state.u_oy[:n]
        self.uid = state.u_id[:n]
        self.own_u = self.uo == player
        self.mil = self.own_u & (self.uk != UK_WORKER)
        self.workers = self.own_u & (self.uk == UK_WORKER)
        nb = state.n_buildings
        self.bk = state.b_kind[:nb]
        self.bo = state.b_owner[:nb]
        self.bleft = state.b_left[:nb]
        self.bprod = state.b_prod[:nb]
        self.own_b = self.bo == player
        self.sel = state.players[player].selection
        self.sel_set = set(self.sel)

    def army_idx(self) -> np.ndarray:
        return np.nonzero(self.mil)[0]

    def army_selected(self) -> bool:
        ids = self.uid[self.mil]
        if len(ids) == 0 or not self.sel_set:
            return False
        return set(int(v) for v in ids) <= self.sel_set

    def fielded_supply(self) -> int:
        table = _unit_supply_table(self.state.cfg)
        return int(table[self.uk[self.mil]].sum())

    def idle_army_supply(self) -> int:
        """Army supply not currently on an attack order (massing at home)."""
        table = _unit_supply_table(self.state.cfg)
        mask = self.mil & (self.uord != ORDER_ATTACK)
        return int(table[self.uk[mask]].sum())

    def queued_army_supply(self) -> int:
        table = _unit_supply_table(self.state.cfg)
        mask = self.own_b & (self.bprod > UK_WORKER)
        return int(table[self.bprod[mask]].sum())

    def all_ordered_near(self, idx: np.ndarray, x: int, y: int, slack: int) -> bool:
        if len(idx) == 0:
            return True
        attacking = self.uord[idx] == ORDER_ATTACK
        near = (np.maximum(np.abs(self.uox[idx] - x), np.abs(self.uoy[idx] - y))
                <= slack)
        return bool(np.all(attacking & near))

    def own_building_idx(self, kind: int, completed_only: bool = False) -> np.ndarray:
        mask = self.own_b & (self.bk == kind)
        if completed_only:
            mask = mask & (self.bleft == 0)
        return np.nonzero(mask)[0]


def _bot_rng(state: GameState, player: int) -> np.random.Generator:
    return np.random.default_rng(
        np.random.PCG64(state.seed * 1000003 + state.tick * 2 + player))


def _select_point(state: GameState, i: int) -> A.PrimitiveAction:
    return A.PrimitiveAction(A.Verb.SELECT, x=int(state.u_x[i]), y=int(state.u_y[i]))


def _select_worker_action(c: _Ctx) -> A.PrimitiveAction | None:
    idx = np.nonzero(c.workers)[0]
    if len(idx) == 0:
        return None
    gathering = idx[c.uord[idx] == ORDER_GATHER]
    i = int(gathering[0]) if len(gathering) else int(idx[0])
    return _select_point(c.state, i)


def _worker_selected(c: _Ctx) -> bool:
    if len(c.sel) != 1:
        return False
    hits = np.nonzero(c.uid == c.sel[0])[0]
    return len(hits) > 0 and bool(c.workers[hits[0]])


def _building_selected(c: _Ctx, b: int) -> bool:
    return len(c.sel) == 1 and c.sel[0] == int(c.state.b_id[b])


def _place_near_home(state: GameState, kind: str, player: int,
                     rng: np.random.Generator, radius: int) -> tuple[int, int] | None:
    """Uniform legal anchor inside the home box; whole-map fallback."""
    mask = legal_placements(state, kind, player)
    bx, by = base_center(state, player)
    s = state.size
    boxed = np.zeros_like(mask)
    x0, y0 = max(0, bx - radius), max(0, by - radius)
    boxed[x0:bx + radius + 1, y0:by + radius + 1] = mask[x0:bx + radius + 1,
                                                         y0:by + radius + 1]
    use = boxed if boxed.any() else mask
    flat = np.nonzero(use.ravel())[0]
    if len(flat) == 0:
        return None
    pick = int(flat[rng.integers(len(flat))])
    return pick // s, pick % s


def _build_flow(c: _Ctx, kind: str, radius: int) -> A.PrimitiveAction | None:
    """Select a worker, then issue the build near home."""
    spot = _place_near_home(c.state, kind, c.player, _bot_rng(c.state, c.player),
                            radius)
    if spot is None:
        return None
    if _worker_selected(c):
        return A.PrimitiveAction(A.Verb.BUILD, kind=kind, x=spot[0], y=spot[1])
    return _select_worker_action(c)


def _staging_point(state: GameState, bx: int, by: int,
                   ex: int, ey: int) -> tuple[int, int]:
    """Point on the home->enemy line, a fixed distance short of the enemy."""
    dx, dy = ex - bx, ey - by
    dist = max(abs(dx), abs(dy), 1)
    frac = max(0, dist - 14)
    s = state.size
    px = min(max(bx + dx * frac // dist, 0), s - 1)
    py = min(max(by + dy * frac // dist, 0), s - 1)
    return int(px), int(py)


def _rule_policy(state: GameState, player: int, P: RuleParams) -> A.PrimitiveAction:
    cfg = state.cfg
    pl = state.players[player]
    enemy = 1 - player
    c = _Ctx(state, player)
    army = c.army_idx()
    bx, by = base_center(state, player)
    ex, ey = base_center(state, enemy)

    allin = state.tick >= state.max_ticks - P.allin_offset

    # -- defense: intruders near the base pull the army home (not when
    # committed to the endgame all-in) ---------------------------------------
    enemy_mil = (~c.own_u) & (c.uk != UK_WORKER)
    if not allin and enemy_mil.any() and len(army):
        d_home = np.maximum(np.abs(c.ux - bx), np.abs(c.uy - by))
        intr = np.nonzero(enemy_mil & (d_home <= cfg.base_defense_radius))[0]
        if len(intr) >= P.defend_min_intruders:
            tgt = int(intr[np.argmin(d_home[intr])])
            tx, ty = int(c.ux[tgt]), int(c.uy[tgt])
            if not c.all_ordered_near(army, tx, ty, slack=6):
                if not c.army_selected():
                    return _select_point(state, int(army[0]))
                return A.PrimitiveAction(A.Verb.ATTACK, x=tx, y=ty)

    # -- attack wave: mass at a staging point outside the enemy base, strike
    # together once assembled; late in the game go all-in so games end -------
    if len(army) and state.tick >= P.attack_period:
        if allin:
            # endgame: throw everything forward, continuously
            if not c.all_ordered_near(army, ex, ey, slack=6):
                if not c.army_selected():
                    return _select_point(state, int(army[0]))
                return A.PrimitiveAction(A.Verb.ATTACK, x=ex, y=ey)
        else:
            cap_reachable = cfg.supply_max - P.worker_target - 2
            effective_target = min(P.army_supply_attack, cap_reachable)
            if P.smart:
                table = _unit_supply_table(cfg)
                enemy_sup = int(table[c.uk[(~c.own_u) & (c.uk != UK_WORKER)]].sum())
                effective_target = min(max(effective_target, enemy_sup - 2),
                                       cap_reachable)
            sx, sy = _staging_point(state, bx, by, ex, ey)
            table = _unit_supply_table(cfg)
            striking = (c.uord[army] == ORDER_ATTACK)
            near_stage = (np.maximum(np.abs(c.ux[army] - sx),
                                     np.abs(c.uy[army] - sy)) <= 5)
            staged_supply = int(table[c.uk[army][near_stage & ~striking]].sum())
            wave_out = bool(striking.any())
            if not wave_out:
                if staged_supply >= max(4, effective_target - 4):
                    if not c.army_selected():
                        return _select_point(state, int(army[0]))
                    return A.PrimitiveAction(A.Verb.ATTACK, x=ex, y=ey)
                if c.idle_army_supply() >= effective_target:
                    if not c.army_selected():
                        return _select_point(state, int(army[0]))
                    return A.PrimitiveAction(A.Verb.RETREAT, x=sx, y=sy)

    # -- economy -------------------------------------------------------------
    # re-task idle workers (builders drop to idle after starting a building)
    idle_w = np.nonzero(c.workers & (c.uord == ORDER_IDLE))[0]
    if len(idle_w):
        if c.sel_set and any(int(c.uid[i]) in c.sel_set for i in idle_w):
            return A.PrimitiveAction(A.Verb.GATHER)
        return _select_point(state, int(idle_w[0]))

    bases = c.own_building_idx(BK_BASE, completed_only=True)
    workers_total = int(c.workers.sum()) + int(
        (c.own_b & (c.bprod == UK_WORKER)).sum())

    # supply building when headroom is low
    supply_idx = c.own_building_idx(BK_SUPPLY)
    if (pl.supply_cap < cfg.supply_max
            and pl.supply_cap - pl.supply_used <= P.supply_margin
            and not (c.bleft[supply_idx] > 0).any()
            and pl.minerals >= cfg.supply.cost):
        act = _build_flow(c, A.SUPPLY, P.build_radius)
        if act is not None:
            return act

    # workers up to target
    if (workers_total < P.worker_target and len(bases)
            and pl.minerals >= cfg.worker.cost
            and pl.supply_used + cfg.worker.supply <= pl.supply_cap):
        idle_bases = bases[c.bprod[bases] == -1]
        if len(idle_bases):
            b = int(idle_bases[0])
            if _building_selected(c, b):
                return A.PrimitiveAction(A.Verb.TRAIN, kind=A.WORKER)
            return A.PrimitiveAction(A.Verb.SELECT, x=int(state.b_x[b]), y=int(state.b_y[b]))

    # production buildings up to target (needs a completed supply for power;
    # boom-first: wait until the worker line is nearly at target)
    prod_target = P.prod_target
    if P.smart:
        prod_target = min(6, max(prod_target, prod_target + pl.minerals // 350))
    if (len(c.own_building_idx(BK_PRODUCTION)) < prod_target
            and workers_total >= P.worker_target - 2
            and pl.minerals >= cfg.production.cost
            and len(c.own_building_idx(BK_SUPPLY, completed_only=True))):
        act = _build_flow(c, A.PRODUCTION, P.build_radius)
        if act is not None:
            return act

    # tech
    if (P.build_tech and len(c.own_building_idx(BK_TECH)) == 0
            and len(c.own_building_idx(BK_PRODUCTION, completed_only=True))
            and pl.minerals >= cfg.tech.cost):
        act = _build_flow(c, A.TECH, P.build_radius)
        if act is not None:
            return act

    # army production
    if c.fielded_supply() + c.queued_army_supply() < P.army_cap_supply:
        prods = c.own_building_idx(BK_PRODUCTION, completed_only=True)
        idle_prods = prods[c.bprod[prods] == -1]
        if len(idle_prods):
            has_tech = len(c.own_building_idx(BK_TECH, completed_only=True)) > 0
            n_ranged = int((c.own_u & (c.uk == UK_RANGED)).sum())
            n_melee = int((c.own_u & (c.uk == UK_MELEE)).sum())
            want_ranged = has_tech and (P.prefer_ranged or n_ranged <= n_melee)
            kind = A.RANGED if want_ranged and pl.minerals >= cfg.ranged.cost else A.MELEE
            stats = getattr(cfg, kind)
            if (pl.minerals >= stats.cost
                    and pl.supply_used + stats.supply <= pl.supply_cap):
                b = int(idle_prods[0])
                if _building_selected(c, b):
                    return A.PrimitiveAction(A.Verb.TRAIN, kind=kind)
                return A.PrimitiveAction(A.Verb.SELECT,
                                         x=int(state.b_x[b]), y=int(state.b_y[b]))

    return A.NOOP
