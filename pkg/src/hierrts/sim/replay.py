"""Replay streams: one JSON record per tick (tick, both actions, state hash),
plus a runner that plays two policies against each other.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, IO

from ..config import SimConfig
from . import actions as A
from .engine import Outcome, outcome, reset, step
from .state import GameState

Policy = Callable[[GameState], A.PrimitiveAction]


class ReplayWriter:
    def __init__(self, fh: IO[str], state: GameState, config_digest: str = ""):
        self._fh = fh
        header = {"type": "header", "seed": state.seed,
                  "difficulty": state.difficulty, "config_digest": config_digest,
                  "initial_hash": state.state_hash()}
        fh.write(json.dumps(header) + "\n")

    def record(self, tick: int, a0: A.PrimitiveAction, a1: A.PrimitiveAction,
               state_hash: str) -> None:
        rec = {"t": tick, "a0": a0.to_json(), "a1": a1.to_json(), "h": state_hash}
        self._fh.write(json.dumps(rec) + "\n")


def read_replay(path: str | Path) -> tuple[dict, list[dict]]:
    lines = Path(path).read_text().splitlines()
    header = json.loads(lines[0])
    if header.get("type") != "header":
        raise ValueError(f"{path}: missing replay header")
    return header, [json.loads(ln) for ln in lines[1:]]


@dataclass
class GameResult:
    state: GameState
    outcome: Outcome
    ticks: int
    # canonical accepted-action symbols per player (noops included; the
    # miner's canonicalization strips them)
    symbols: tuple[list[str], list[str]] = field(default_factory=lambda: ([], []))


def run_game(cfg: SimConfig, seed: int, difficulty: int,
             policy0: Policy, policy1: Policy,
             replay_fh: IO[str] | None = None,
             config_digest: str = "") -> GameResult:
    state = reset(cfg, seed, difficulty)
    writer = ReplayWriter(replay_fh, state, config_digest) if replay_fh else None
    syms0: list[str] = []
    syms1: list[str] = []
    while not state.terminal:
        a0 = policy0(state)
        a1 = policy1(state)
        tick = state.tick
        state, ev = step(state, a0, a1)
        if ev.accepted[0] and ev.symbols[0] is not None:
            syms0.append(ev.symbols[0])
        if ev.accepted[1] and ev.symbols[1] is not None:
            syms1.append(ev.symbols[1])
        if writer:
            writer.record(tick, a0, a1, state.state_hash())
    return GameResult(state=state, outcome=outcome(state), ticks=state.tick,
                      symbols=(syms0, syms1))


def replay_game(cfg: SimConfig, header: dict, records: list[dict]) -> list[str]:
    """Re-run a replay's action stream; returns the per-tick state hashes."""
    state = reset(cfg, header["seed"], header["difficulty"])
    hashes = []
    for rec in records:
        a0 = A.PrimitiveAction.from_json(rec["a0"])
        a1 = A.PrimitiveAction.from_json(rec["a1"])
        state, _ = step(state, a0, a1)
        hashes.append(state.state_hash())
    return hashes
