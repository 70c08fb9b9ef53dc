"""Hierarchical RL on a deterministic micro-RTS.

Pipeline: expert replays -> PrefixSpan macro mining -> two-level
controller/sub-policy architecture trained with PPO -> curriculum transfer
across scripted-opponent difficulty levels.
"""

__version__ = "0.1.0"
