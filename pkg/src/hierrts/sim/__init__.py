from .actions import PrimitiveAction, Verb
from .engine import Outcome, StepEvents, outcome, reset, step
from .observe import Observation, observe
from .placement import legal_placements, place_random
from .state import GameState

__all__ = [
    "GameState",
    "Observation",
    "Outcome",
    "PrimitiveAction",
    "StepEvents",
    "Verb",
    "legal_placements",
    "observe",
    "outcome",
    "place_random",
    "reset",
    "step",
]
