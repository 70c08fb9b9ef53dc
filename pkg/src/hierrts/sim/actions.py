"""Primitive actions and the canonical symbol alphabet used by the miner.

A primitive action is one player-issued command per tick. Illegal commands
are recorded as rejected no-ops by the engine, never raised.
"""

from __future__ import annotations

from dataclasses import dataclass


class Verb:
    NOOP = "noop"
    SELECT = "select"
    GATHER = "gather"
    BUILD = "build"
    TRAIN = "train"
    ATTACK = "attack"
    RETREAT = "retreat"

    ALL = (NOOP, SELECT, GATHER, BUILD, TRAIN, ATTACK, RETREAT)


# Unit / building kind names (argument of train/build).
WORKER, MELEE, RANGED = "worker", "melee", "ranged"
BASE, SUPPLY, PRODUCTION, TECH = "base", "supply", "production", "tech"

UNIT_KINDS = (WORKER, MELEE, RANGED)
BUILDING_KINDS = (BASE, SUPPLY, PRODUCTION, TECH)


@dataclass(frozen=True)
class PrimitiveAction:
    """One command: verb plus optional kind (build/train) and point (x, y)."""

    verb: str
    kind: str | None = None
    x: int | None = None
    y: int | None = None

    def to_json(self) -> list:
        return [self.verb, self.kind, self.x, self.y]

    @classmethod
    def from_json(cls, data: list) -> "PrimitiveAction":
        return cls(verb=data[0], kind=data[1], x=data[2], y=data[3])


NOOP = PrimitiveAction(Verb.NOOP)


# Canonical, position-free symbol alphabet (id order is the lexicographic
# tie-break order used by the macro miner). Selection symbols name what the
# select resolved to, not where.
SYMBOLS = (
    "select_base",        # 0
    "select_supply",      # 1
    "select_production",  # 2
    "select_tech",        # 3
    "select_worker",      # 4
    "select_army",        # 5
    "train_worker",       # 6
    "build_supply",       # 7
    "build_production",   # 8
    "build_tech",         # 9
    "train_melee",        # 10
    "train_ranged",       # 11
    "gather",             # 12
    "attack",             # 13
    "retreat",            # 14
    "noop",               # 15
)

SYMBOL_ID = {name: i for i, name in enumerate(SYMBOLS)}

# Symbols that carry no standalone intent: a sequence made only of these is
# dropped by the macro-space filter.
MEANINGLESS_SYMBOLS = frozenset(
    {"select_base", "select_supply", "select_production", "select_tech",
     "select_worker", "select_army", "noop", "retreat"}
)

SELECT_SYMBOLS = frozenset(s for s in SYMBOLS if s.startswith("select_"))
