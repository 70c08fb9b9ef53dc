"""Configuration tree: one dataclass section per subsystem, YAML round-trip,
strict validation (unknown keys rejected), layered defaults < file < flags.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import yaml


class ConfigError(ValueError):
    """Raised for unknown keys, bad types, or out-of-range values."""


# ---------------------------------------------------------------------------
# Simulator
# ---------------------------------------------------------------------------

@dataclass
class UnitStats:
    cost: int
    supply: int
    hp: int
    damage: int
    attack_range: int
    train_ticks: int


@dataclass
class BuildingStats:
    cost: int
    hp: int
    footprint: int
    build_ticks: int
    supply_provided: int = 0


@dataclass
class SimConfig:
    map_size: int = 32
    max_ticks: int = 1200
    starting_minerals: int = 50
    starting_workers: int = 5
    income_per_tick: int = 1          # minerals per gathering worker per tick
    supply_max: int = 48
    power_radius: int = 8             # Chebyshev radius of supply-building coverage
    sight_radius: int = 8
    fog: bool = False
    spawn_jitter: int = 2             # seeded offset applied to the fixed spawn corners
    mineral_patches: int = 6          # patches placed near each spawn
    base_defense_radius: int = 12     # scripted bots react to intruders inside this radius

    worker: UnitStats = field(default_factory=lambda: UnitStats(
        cost=50, supply=1, hp=40, damage=6, attack_range=1, train_ticks=16))
    melee: UnitStats = field(default_factory=lambda: UnitStats(
        cost=80, supply=2, hp=110, damage=18, attack_range=1, train_ticks=24))
    ranged: UnitStats = field(default_factory=lambda: UnitStats(
        cost=110, supply=2, hp=85, damage=14, attack_range=4, train_ticks=28))

    base: BuildingStats = field(default_factory=lambda: BuildingStats(
        cost=300, hp=1200, footprint=3, build_ticks=0, supply_provided=10))
    supply: BuildingStats = field(default_factory=lambda: BuildingStats(
        cost=80, hp=300, footprint=2, build_ticks=20, supply_provided=8))
    production: BuildingStats = field(default_factory=lambda: BuildingStats(
        cost=120, hp=550, footprint=2, build_ticks=30))
    tech: BuildingStats = field(default_factory=lambda: BuildingStats(
        cost=130, hp=450, footprint=2, build_ticks=30))

    # Difficulty knob table, versioned. Row = (worker_target, army_supply_target,
    # attack_period). All three columns are non-decreasing in difficulty.
    knob_version: int = 1
    knobs: dict[int, tuple[int, int, int]] = field(default_factory=lambda: {
        1: (5, 8, 600),
        2: (6, 12, 640),
        3: (7, 18, 680),
        4: (8, 24, 720),
        5: (10, 28, 760),
        6: (12, 32, 830),
        7: (14, 34, 900),
    })

    def validate(self) -> None:
        if self.map_size < 16:
            raise ConfigError("map_size must be >= 16")
        if self.max_ticks < 1:
            raise ConfigError("max_ticks must be positive")
        prev = (0, 0, 0)
        for d in range(1, 8):
            if d not in self.knobs:
                raise ConfigError(f"knob table missing difficulty {d}")
            row = tuple(self.knobs[d])
            if any(a < b for a, b in zip(row, prev)):
                raise ConfigError("knob table must be non-decreasing in difficulty")
            prev = row


# ---------------------------------------------------------------------------
# Mining
# ---------------------------------------------------------------------------

@dataclass
class MiningConfig:
    games: int = 50
    opponent_difficulty: int = 7
    min_support_frac: float = 0.02    # min_support = max(1, round(frac * |db|))
    max_len: int = 4                  # pattern length cap C
    top_count: int = 20

    def validate(self) -> None:
        if self.max_len < 1 or self.top_count < 1:
            raise ConfigError("mining max_len and top_count must be >= 1")
        if not 0.0 < self.min_support_frac <= 1.0:
            raise ConfigError("min_support_frac must be in (0, 1]")


# ---------------------------------------------------------------------------
# Networks
# ---------------------------------------------------------------------------

@dataclass
class NetworkConfig:
    controller_hidden: list[int] = field(default_factory=lambda: [32, 32])
    base_hidden: list[int] = field(default_factory=lambda: [64, 64])
    battle_hidden: list[int] = field(default_factory=lambda: [96])
    battle_rule_hidden: list[int] = field(default_factory=lambda: [16])
    conv_channels: list[int] = field(default_factory=lambda: [8, 8])
    conv_kernels: list[int] = field(default_factory=lambda: [4, 3])
    conv_strides: list[int] = field(default_factory=lambda: [2, 2])
    battle_plane_pool: int = 2        # max-pool factor on the 32x32 planes
    position_grid: int = 8            # position head is an 8x8 coarse grid
    activation: str = "relu"
    init_scale: float = 1.0
    step_size: float = 3e-4
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_eps: float = 1e-8

    def validate(self) -> None:
        if self.activation not in ("relu", "tanh"):
            raise ConfigError(f"unknown activation {self.activation!r}")
        if not (len(self.conv_channels) == len(self.conv_kernels) == len(self.conv_strides)):
            raise ConfigError("conv spec lists must have equal length")


# ---------------------------------------------------------------------------
# PPO
# ---------------------------------------------------------------------------

@dataclass
class PPOConfig:
    clip: float = 0.2
    c1: float = 0.5                   # value-loss coefficient
    c2: float = 0.01                  # entropy coefficient
    gamma: float = 0.995
    lam: float = 0.95
    epochs: int = 4
    minibatch: int = 256
    advantage_norm: bool = True
    value_loss: str = "standard"      # or "printed" (test-only literal variant)

    def validate(self) -> None:
        if not 0.0 < self.clip < 1.0:
            raise ConfigError("clip must be in (0, 1)")
        if not 0.0 <= self.gamma <= 1.0 or not 0.0 <= self.lam <= 1.0:
            raise ConfigError("gamma and lam must be in [0, 1]")
        if self.c1 < 0 or self.c2 < 0:
            raise ConfigError("loss coefficients must be >= 0")
        if self.value_loss not in ("standard", "printed"):
            raise ConfigError(f"unknown value_loss {self.value_loss!r}")


# ---------------------------------------------------------------------------
# Hierarchy / rewards
# ---------------------------------------------------------------------------

@dataclass
class RewardWeights:
    # Dense terms for the mixture reward (per decision step, capped).
    base_production_value: float = 1e-3   # per mineral value of completed units/buildings
    base_idle_production: float = 5e-4    # penalty per idle completed production facility
    battle_kill_value: float = 2e-3       # per mineral value of enemy entities destroyed
    score_scale: float = 1e-3             # scale for the score reward kind
    dense_cap: float = 0.5                # |dense term| cap per step
    time_penalty: float = 1e-3            # per decision step, shared by mixture kind


@dataclass
class HierConfig:
    controller_interval: int = 8      # K: sub-policy decisions per controller choice
    ticks_per_decision: int = 8       # env ticks per sub-policy decision step
    battle_model: str = "combat_rule"  # combat_rule | combat_network | mixture
    reward: str = "mixture"           # win_loss | score | mixture
    reward_weights: RewardWeights = field(default_factory=RewardWeights)
    alternating: bool = False
    alternating_block: int = 1        # iterations per group before switching
    # Observation-view index lists are defined in hierrts.sim.observe.

    def validate(self) -> None:
        if self.controller_interval < 1 or self.ticks_per_decision < 1:
            raise ConfigError("controller_interval and ticks_per_decision must be >= 1")
        if self.battle_model not in ("combat_rule", "combat_network", "mixture"):
            raise ConfigError(f"unknown battle_model {self.battle_model!r}")
        if self.reward not in ("win_loss", "score", "mixture"):
            raise ConfigError(f"unknown reward kind {self.reward!r}")


# ---------------------------------------------------------------------------
# Training / curriculum
# ---------------------------------------------------------------------------

@dataclass
class TrainConfig:
    iterations: int = 100             # Z of the outer loop
    episodes_per_iter: int = 100      # M episodes collected per iteration
    difficulty: int = 1
    eval_interval: int = 5            # greedy eval every N iterations
    eval_games: int = 40
    stop_winrate: float = 0.0         # early stop once eval winrate reaches this (0 = never)

    def validate(self) -> None:
        if not 1 <= self.difficulty <= 7:
            raise ConfigError("difficulty must be in 1..7")
        if self.iterations < 1 or self.episodes_per_iter < 1:
            raise ConfigError("iterations and episodes_per_iter must be >= 1")


@dataclass
class CurriculumStage:
    difficulty: int
    threshold: float = 0.8            # promotion winrate
    eval_games: int = 100             # E games per promotion check
    max_iterations: int = 100
    episodes_per_iter: int = 100


@dataclass
class CurriculumConfig:
    stages: list[CurriculumStage] = field(default_factory=lambda: [
        CurriculumStage(difficulty=2),
        CurriculumStage(difficulty=5),
        CurriculumStage(difficulty=7),
    ])
    eval_interval: int = 5
    auto_alternate_top: bool = True   # switch to alternating updates at the final stage

    def validate(self) -> None:
        diffs = [s.difficulty for s in self.stages]
        if any(b <= a for a, b in zip(diffs, diffs[1:])):
            raise ConfigError("curriculum difficulties must be strictly increasing")
        for s in self.stages:
            if not 0.0 < s.threshold <= 1.0:
                raise ConfigError("promotion threshold must be in (0, 1]")
            if not 1 <= s.difficulty <= 7:
                raise ConfigError("stage difficulty must be in 1..7")


# ---------------------------------------------------------------------------
# Root
# ---------------------------------------------------------------------------

@dataclass
class RunConfig:
    seed: int = 7
    out_dir: str = "runs/run"
    workers: int = 0                  # 0 = serial; N = rollout worker processes
    env: SimConfig = field(default_factory=SimConfig)
    mining: MiningConfig = field(default_factory=MiningConfig)
    network: NetworkConfig = field(default_factory=NetworkConfig)
    ppo: PPOConfig = field(default_factory=PPOConfig)
    hier: HierConfig = field(default_factory=HierConfig)
    train: TrainConfig = field(default_factory=TrainConfig)
    curriculum: CurriculumConfig = field(default_factory=CurriculumConfig)

    def validate(self) -> "RunConfig":
        for section in (self.env, self.mining, self.network, self.ppo, self.hier,
                        self.train, self.curriculum):
            section.validate()
        return self

    # -- serialization ------------------------------------------------------

    def to_dict(self) -> dict[str, Any]:
        return _asdict(self)

    def to_yaml(self, path: str | Path) -> None:
        Path(path).write_text(yaml.safe_dump(self.to_dict(), sort_keys=True))

    def digest(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.blake2b(blob, digest_size=8).hexdigest()

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "RunConfig":
        cfg = _from_dict(cls, data, path="")
        return cfg.validate()

    @classmethod
    def from_yaml(cls, path: str | Path) -> "RunConfig":
        data = yaml.safe_load(Path(path).read_text()) or {}
        if not isinstance(data, dict):
            raise ConfigError(f"config file {path} must contain a mapping")
        return cls.from_dict(data)


def _asdict(obj: Any) -> Any:
    if dataclasses.is_dataclass(obj):
        return {f.name: _asdict(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {k: _asdict(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_asdict(v) for v in obj]
    return obj


def _from_dict(cls: type, data: Any, path: str) -> Any:
    """Strict dataclass hydration: unknown keys raise, sections merge over defaults."""
    if not dataclasses.is_dataclass(cls):
        return data
    if not isinstance(data, dict):
        raise ConfigError(f"section {path or '<root>'} must be a mapping, got {type(data).__name__}")
    fields = {f.name: f for f in dataclasses.fields(cls)}
    unknown = set(data) - set(fields)
    if unknown:
        raise ConfigError(f"unknown config key(s) {sorted(unknown)} in section {path or '<root>'}")
    kwargs: dict[str, Any] = {}
    for name, f in fields.items():
        if name not in data:
            continue
        value = data[name]
        sub = path + "." + name if path else name
        ftype = f.type if isinstance(f.type, type) else _resolve_type(f)
        if ftype is not None and dataclasses.is_dataclass(ftype):
            kwargs[name] = _from_dict(ftype, value, sub)
        elif name == "stages":
            kwargs[name] = [_from_dict(CurriculumStage, v, sub) for v in value]
        elif name == "knobs":
            kwargs[name] = {int(k): tuple(v) for k, v in value.items()}
        else:
            kwargs[name] = value
    return cls(**kwargs)


def _resolve_type(f: dataclasses.Field) -> type | None:
    # Field annotations are strings under `from __future__ import annotations`.
    name = f.type if isinstance(f.type, str) else getattr(f.type, "__name__", None)
    return _SECTION_TYPES.get(name)


_SECTION_TYPES: dict[str, type] = {
    t.__name__: t
    for t in (SimConfig, MiningConfig, NetworkConfig, PPOConfig, HierConfig,
              TrainConfig, CurriculumConfig, RewardWeights, UnitStats, BuildingStats)
}


def default_config() -> RunConfig:
    return RunConfig().validate()
