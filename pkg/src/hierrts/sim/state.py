"""Game state: struct-of-arrays entity storage plus per-player records.

Integer-only dynamics keep the compiled and pure-Python kernels bit-identical;
the arrays here are exactly what the kernels consume.
"""

from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass, field

import numpy as np

from ..config import SimConfig
from . import actions as A

# Unit kind codes (array encoding).
UK_WORKER, UK_MELEE, UK_RANGED = 0, 1, 2
UNIT_KIND_NAMES = (A.WORKER, A.MELEE, A.RANGED)
UNIT_KIND_CODE = {name: i for i, name in enumerate(UNIT_KIND_NAMES)}

# Building kind codes.
BK_BASE, BK_SUPPLY, BK_PRODUCTION, BK_TECH = 0, 1, 2, 3
BUILDING_KIND_NAMES = (A.BASE, A.SUPPLY, A.PRODUCTION, A.TECH)
BUILDING_KIND_CODE = {name: i for i, name in enumerate(BUILDING_KIND_NAMES)}

# Unit order codes.
ORDER_IDLE, ORDER_GATHER, ORDER_ATTACK, ORDER_MOVE = 0, 1, 2, 3
ORDER_NAMES = ("idle", "gather", "attack", "move")

# Occupancy codes.
OCC_EMPTY, OCC_MINERAL, OCC_BUILDING, OCC_UNIT = 0, 1, 2, 3

_UNIT_FIELDS = ("u_id", "u_kind", "u_owner", "u_x", "u_y", "u_hp",
                "u_order", "u_ox", "u_oy")
_BLDG_FIELDS = ("b_id", "b_kind", "b_owner", "b_x", "b_y", "b_hp",
                "b_left", "b_prod", "b_prod_left", "b_foot")


@dataclass
class PlayerRecord:
    minerals: int
    gathered: int = 0
    spent: int = 0
    supply_used: int = 0
    supply_cap: int = 0
    produced_value: int = 0
    kill_value: int = 0
    selection: tuple[int, ...] = ()

    @property
    def cumulative_score(self) -> int:
        return self.produced_value + self.kill_value

    def to_tuple(self) -> tuple:
        return (self.minerals, self.gathered, self.spent, self.supply_used,
                self.supply_cap, self.produced_value, self.kill_value,
                self.selection)


@dataclass
class UnitRecord:
    uid: int
    kind: str
    owner: int
    position: tuple[int, int]
    hitpoints: int
    order: str
    order_target: tuple[int, int]


@dataclass
class BuildingRecord:
    bid: int
    kind: str
    owner: int
    position: tuple[int, int]
    hitpoints: int
    footprint: int
    under_construction: bool
    producing: str | None
    production_ticks_left: int


@dataclass
class GameState:
    cfg: SimConfig
    seed: int
    difficulty: int
    tick: int = 0
    terminal: bool = False
    winner: int = -1              # -1 ongoing, 0/1 player, 2 tie
    next_id: int = 0
    players: list[PlayerRecord] = field(default_factory=list)

    # entity arrays: capacity may exceed count, live rows are [:n_units]/[:n_buildings]
    n_units: int = 0
    n_buildings: int = 0
    u_id: np.ndarray = None
    u_kind: np.ndarray = None
    u_owner: np.ndarray = None
    u_x: np.ndarray = None
    u_y: np.ndarray = None
    u_hp: np.ndarray = None
    u_order: np.ndarray = None
    u_ox: np.ndarray = None
    u_oy: np.ndarray = None
    b_id: np.ndarray = None
    b_kind: np.ndarray = None
    b_owner: np.ndarray = None
    b_x: np.ndarray = None
    b_y: np.ndarray = None
    b_hp: np.ndarray = None
    b_left: np.ndarray = None     # construction ticks remaining; 0 = completed
    b_prod: np.ndarray = None     # unit kind in production, -1 idle
    b_prod_left: np.ndarray = None
    b_foot: np.ndarray = None     # footprint size (cached from config)

    terrain: np.ndarray = None    # uint8 (S,S): 1 = mineral patch
    occ_kind: np.ndarray = None   # uint8 (S,S)
    occ_id: np.ndarray = None     # int32 (S,S): live array index, -1 otherwise

    @property
    def max_ticks(self) -> int:
        return self.cfg.max_ticks

    @property
    def size(self) -> int:
        return self.cfg.map_size

    # -- construction helpers ------------------------------------------------

    @classmethod
    def empty(cls, cfg: SimConfig, seed: int, difficulty: int,
              unit_cap: int = 64, bldg_cap: int = 16) -> "GameState":
        s = cfg.map_size
        st = cls(cfg=cfg, seed=seed, difficulty=difficulty)
        for name in _UNIT_FIELDS:
            setattr(st, name, np.zeros(unit_cap, dtype=np.int32))
        for name in _BLDG_FIELDS:
            setattr(st, name, np.zeros(bldg_cap, dtype=np.int32))
        st.terrain = np.zeros((s, s), dtype=np.uint8)
        st.occ_kind = np.zeros((s, s), dtype=np.uint8)
        st.occ_id = np.full((s, s), -1, dtype=np.int32)
        st.players = [PlayerRecord(minerals=cfg.starting_minerals) for _ in range(2)]
        return st

    def _grow_units(self) -> None:
        for name in _UNIT_FIELDS:
            arr = getattr(self, name)
            grown = np.zeros(len(arr) * 2, dtype=np.int32)
            grown[: len(arr)] = arr
            setattr(self, name, grown)

    def _grow_buildings(self) -> None:
        for name in _BLDG_FIELDS:
            arr = getattr(self, name)
            grown = np.zeros(len(arr) * 2, dtype=np.int32)
            grown[: len(arr)] = arr
            setattr(self, name, grown)

    def add_unit(self, kind: int, owner: int, x: int, y: int, hp: int,
                 order: int = ORDER_IDLE) -> int:
        if self.n_units == len(self.u_id):
            self._grow_units()
        i = self.n_units
        uid = self.next_id
        self.next_id += 1
        self.u_id[i] = uid
        self.u_kind[i] = kind
        self.u_owner[i] = owner
        self.u_x[i] = x
        self.u_y[i] = y
        self.u_hp[i] = hp
        self.u_order[i] = order
        self.u_ox[i] = x
        self.u_oy[i] = y
        self.n_units += 1
        self.occ_kind[x, y] = OCC_UNIT
        self.occ_id[x, y] = i
        return uid

    def add_building(self, kind: int, owner: int, x: int, y: int, hp: int,
                     build_left: int) -> int:
        if self.n_buildings == len(self.b_id):
            self._grow_buildings()
        i = self.n_buildings
        bid = self.next_id
        self.next_id += 1
        self.b_id[i] = bid
        self.b_kind[i] = kind
        self.b_owner[i] = owner
        self.b_x[i] = x
        self.b_y[i] = y
        self.b_hp[i] = hp
        self.b_left[i] = build_left
        self.b_prod[i] = -1
        self.b_prod_left[i] = 0
        f = self.footprint(kind)
        self.b_foot[i] = f
        self.n_buildings += 1
        self.occ_kind[x:x + f, y:y + f] = OCC_BUILDING
        self.occ_id[x:x + f, y:y + f] = i
        return bid

    def footprint(self, kind_code: int) -> int:
        name = BUILDING_KIND_NAMES[kind_code]
        return getattr(self.cfg, name).footprint

    def rebuild_occupancy(self) -> None:
        """Repaint occupancy from terrain + live entities (after removals)."""
        self.occ_kind[:] = np.where(self.terrain == 1, OCC_MINERAL, OCC_EMPTY).astype(np.uint8)
        self.occ_id[:] = -1
        for i in range(self.n_buildings):
            f = int(self.b_foot[i])
            x, y = self.b_x[i], self.b_y[i]
            self.occ_kind[x:x + f, y:y + f] = OCC_BUILDING
            self.occ_id[x:x + f, y:y + f] = i
        for i in range(self.n_units):
            self.occ_kind[self.u_x[i], self.u_y[i]] = OCC_UNIT
            self.occ_id[self.u_x[i], self.u_y[i]] = i

    # -- queries --------------------------------------------------------------

    def unit_index_by_id(self, uid: int) -> int:
        hits = np.nonzero(self.u_id[: self.n_units] == uid)[0]
        return int(hits[0]) if len(hits) else -1

    def building_index_by_id(self, bid: int) -> int:
        hits = np.nonzero(self.b_id[: self.n_buildings] == bid)[0]
        return int(hits[0]) if len(hits) else -1

    def units(self) -> list[UnitRecord]:
        out = []
        for i in range(self.n_units):
            out.append(UnitRecord(
                uid=int(self.u_id[i]),
                kind=UNIT_KIND_NAMES[self.u_kind[i]],
                owner=int(self.u_owner[i]),
                position=(int(self.u_x[i]), int(self.u_y[i])),
                hitpoints=int(self.u_hp[i]),
                order=ORDER_NAMES[self.u_order[i]],
                order_target=(int(self.u_ox[i]), int(self.u_oy[i])),
            ))
        return out

    def buildings(self) -> list[BuildingRecord]:
        out = []
        for i in range(self.n_buildings):
            kind = int(self.b_kind[i])
            prod = int(self.b_prod[i])
            out.append(BuildingRecord(
                bid=int(self.b_id[i]),
                kind=BUILDING_KIND_NAMES[kind],
                owner=int(self.b_owner[i]),
                position=(int(self.b_x[i]), int(self.b_y[i])),
                hitpoints=int(self.b_hp[i]),
                footprint=self.footprint(kind),
                under_construction=bool(self.b_left[i] > 0),
                producing=UNIT_KIND_NAMES[prod] if prod >= 0 else None,
                production_ticks_left=int(self.b_prod_left[i]),
            ))
        return out

    def unit_counts(self, player: int) -> np.ndarray:
        """Counts per unit kind code for one player."""
        mask = self.u_owner[: self.n_units] == player
        return np.bincount(self.u_kind[: self.n_units][mask], minlength=3)

    def building_counts(self, player: int, completed_only: bool = False) -> np.ndarray:
        mask = self.b_owner[: self.n_buildings] == player
        if completed_only:
            mask &= self.b_left[: self.n_buildings] == 0
        return np.bincount(self.b_kind[: self.n_buildings][mask], minlength=4)

    def base_alive(self, player: int) -> bool:
        n = self.n_buildings
        mask = ((self.b_owner[:n] == player) & (self.b_kind[:n] == BK_BASE))
        return bool(mask.any())

    # -- serialization ---------------------------------------------------------

    def to_bytes(self) -> bytes:
        parts = [struct.pack("<qqiiqq", self.seed, self.tick, self.difficulty,
                             self.winner, self.next_id, int(self.terminal))]
        for p in self.players:
            parts.append(struct.pack("<qqqqqqq", p.minerals, p.gathered, p.spent,
                                     p.supply_used, p.supply_cap,
                                     p.produced_value, p.kill_value))
            parts.append(struct.pack(f"<q{len(p.selection)}q", len(p.selection), *p.selection))
        nu, nb = self.n_units, self.n_buildings
        parts.append(struct.pack("<qq", nu, nb))
        for name in _UNIT_FIELDS:
            parts.append(getattr(self, name)[:nu].tobytes())
        for name in _BLDG_FIELDS:
            parts.append(getattr(self, name)[:nb].tobytes())
        parts.append(self.terrain.tobytes())
        return b"".join(parts)

    def state_hash(self) -> str:
        return hashlib.blake2b(self.to_bytes(), digest_size=16).hexdigest()

    def copy(self) -> "GameState":
        st = GameState(cfg=self.cfg, seed=self.seed, difficulty=self.difficulty,
                       tick=self.tick, terminal=self.terminal, winner=self.winner,
                       next_id=self.next_id)
        st.players = [PlayerRecord(*p.to_tuple()) for p in self.players]
        st.n_units = self.n_units
        st.n_buildings = self.n_buildings
        for name in _UNIT_FIELDS + _BLDG_FIELDS:
            setattr(st, name, getattr(self, name).copy())
        st.terrain = self.terrain.copy()
        st.occ_kind = self.occ_kind.copy()
        st.occ_id = self.occ_id.copy()
        return st

    def to_dict(self) -> dict:
        """Field-level view for debugging and state-diff tests."""
        return {
            "seed": self.seed,
            "tick": self.tick,
            "difficulty": self.difficulty,
            "terminal": self.terminal,
            "winner": self.winner,
            "players": [p.to_tuple() for p in self.players],
            "units": [(int(self.u_id[i]), int(self.u_kind[i]), int(self.u_owner[i]),
                       int(self.u_x[i]), int(self.u_y[i]), int(self.u_hp[i]),
                       int(self.u_order[i])) for i in range(self.n_units)],
            "buildings": [(int(self.b_id[i]), int(self.b_kind[i]), int(self.b_owner[i]),
                           int(self.b_x[i]), int(self.b_y[i]), int(self.b_hp[i]),
                           int(self.b_left[i])) for i in range(self.n_buildings)],
            "terrain": self.terrain.nonzero()[0].tolist(),
        }
