"""Building placement: obstacle dilation by the candidate footprint, the
supply-coverage (power) mask for non-supply buildings, and uniform random
choice among legal anchors.
"""

from __future__ import annotations

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .state import BK_SUPPLY, BUILDING_KIND_CODE, GameState, OCC_EMPTY


def power_mask(state: GameState, player: int) -> np.ndarray:
    """Cells covered by a completed own supply building (Chebyshev radius)."""
    s = state.size
    mask = np.zeros((s, s), dtype=bool)
    r = state.cfg.power_radius
    for i in range(state.n_buildings):
        if (state.b_kind[i] == BK_SUPPLY and state.b_owner[i] == player
                and state.b_left[i] == 0):
            x, y = int(state.b_x[i]), int(state.b_y[i])
            mask[max(0, x - r):x + r + 1, max(0, y - r):y + r + 1] = True
    return mask


def legal_placements(state: GameState, kind: str, player: int = 0) -> np.ndarray:
    """Boolean anchor mask: True where the footprint fits with no overlap.

    Obstacles (anything occupying a cell) are dilated by the f x f footprint,
    so a True anchor guarantees a conflict-free placement. Non-supply
    buildings additionally require every footprint cell powered.
    """
    s = state.size
    f = getattr(state.cfg, kind).footprint
    kind_code = BUILDING_KIND_CODE[kind]

    obstacle = state.occ_kind != OCC_EMPTY
    mask = np.zeros((s, s), dtype=bool)
    windows = sliding_window_view(obstacle, (f, f))
    mask[: s - f + 1, : s - f + 1] = ~windows.any(axis=(2, 3))

    if kind_code != BK_SUPPLY:
        powered = power_mask(state, player)
        ok = np.zeros((s, s), dtype=bool)
        pw = sliding_window_view(powered, (f, f))
        ok[: s - f + 1, : s - f + 1] = pw.all(axis=(2, 3))
        mask &= ok
    return mask


def placement_legal_at(state: GameState, kind: str, x: int, y: int,
                       player: int = 0) -> bool:
    """Single-anchor legality, used by the engine's build validation."""
    s = state.size
    f = getattr(state.cfg, kind).footprint
    if x < 0 or y < 0 or x + f > s or y + f > s:
        return False
    if (state.occ_kind[x:x + f, y:y + f] != OCC_EMPTY).any():
        return False
    if BUILDING_KIND_CODE[kind] != BK_SUPPLY:
        if not power_mask(state, player)[x:x + f, y:y + f].all():
            return False
    return True


def place_random(state: GameState, kind: str, rng: np.random.Generator,
                 player: int = 0) -> tuple[int, int] | None:
    """Uniform choice among legal anchors; None when the mask is empty."""
    mask = legal_placements(state, kind, player)
    flat = np.nonzero(mask.ravel())[0]
    if len(flat) == 0:
        return None
    pick = int(flat[rng.integers(len(flat))])
    return pick // state.size, pick % state.size
