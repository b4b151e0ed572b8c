"""Gradient-descent bit-flip steppers: single-bit, multi-bit, adaptive.

The inversion metric for symbol k is

    E_k = x_k y_k + w * sum_{i in M(k)} s_i + q_k

with weight w = 1 and q = 0 for the deterministic baselines.  Low E_k marks
a flip candidate; flipping bit k changes the objective by exactly -2 E_k
(for w = 1, q = 0), which is what makes the loop a coordinate ascent.

All E_k within one iteration are computed from a snapshot of the syndromes
taken at iteration start, so multi-bit flips carry parallel semantics: the
flip set is exactly {k : E_k < threshold} of the pre-step state.
"""

from __future__ import annotations

import numpy as np

from .codes import ParityCheckCode
from .core import DecoderState, Stepper


def inversion(x_k: float, y_k: float, adj_syndromes, w: float = 1.0, q_k: float = 0.0) -> float:
    """Scalar inversion metric for one symbol."""
    return float(x_k * y_k + w * sum(adj_syndromes) + q_k)


def inversions(code: ParityCheckCode, state: DecoderState, y: np.ndarray,
               w: float = 1.0, q: np.ndarray | None = None) -> np.ndarray:
    """Vector of E_k over all symbols from the current syndrome snapshot."""
    e = state.x * y + w * code.syndrome_sums(state.s)
    if q is not None:
        e = e + q
    return e


def flip_single(code: ParityCheckCode, state: DecoderState, e: np.ndarray) -> int:
    """Flip the global argmin of E (ties break to the lowest index)."""
    k = int(np.argmin(e))
    state.x[k] = -state.x[k]
    state.s[code.col_neighbors[k]] *= -1
    return k


def flip_where(code: ParityCheckCode, state: DecoderState, mask: np.ndarray) -> None:
    """Flip every masked bit simultaneously, then refresh the syndromes.

    A no-op mask still counts as an iteration; the caller's loop advances t
    regardless, so a stalled threshold rule terminates at the budget.
    """
    if mask.any():
        state.x[mask] = -state.x[mask]
        state.s = code.syndrome(state.x)


class SingleFlipStepper(Stepper):
    """One flip per iteration at the minimum inversion metric."""

    def __init__(self, code: ParityCheckCode, y: np.ndarray,
                 w: float = 1.0, noise=None):
        self.code = code
        self.y = np.asarray(y, dtype=np.float64)
        self.w = float(w)
        self.noise = noise

    def step(self, state: DecoderState) -> None:
        q = self.noise.draw() if self.noise is not None else None
        e = inversions(self.code, state, self.y, self.w, q)
        flip_single(self.code, state, e)


class MultiFlipStepper(Stepper):
    """Threshold-triggered parallel flips with optional mode switching.

    While the mode flag is 1 every bit with E_k < theta flips in parallel;
    with mode switching enabled, any iteration that decreases the objective
    drops the flag to 0 permanently and the stepper degrades to single-bit
    flips from then on.
    """

    def __init__(self, code: ParityCheckCode, y: np.ndarray, theta: float,
                 w: float = 1.0, noise=None, mode_switching: bool = True):
        self.code = code
        self.y = np.asarray(y, dtype=np.float64)
        self.theta = float(theta)
        self.w = float(w)
        self.noise = noise
        self.mode_switching = mode_switching

    def start(self, state: DecoderState) -> None:
        state.prev_objective = self.objective_of(state)

    def step(self, state: DecoderState) -> None:
        q = self.noise.draw() if self.noise is not None else None
        e = inversions(self.code, state, self.y, self.w, q)
        if state.mu == 1:
            flip_where(self.code, state, e < self.theta)
        else:
            flip_single(self.code, state, e)
        if self.mode_switching:
            f = self.objective_of(state)
            if f < state.prev_objective:
                state.mu = 0
            state.prev_objective = f


class AdaptiveThresholdStepper(Stepper):
    """Per-symbol thresholds that decay toward zero on non-flip iterations.

    Each symbol compares its metric against its own threshold: E_k below
    theta_k flips the bit (threshold kept), otherwise theta_k is multiplied
    by lam in (0, 1].  lam = 1 reproduces the fixed-threshold multi-bit rule
    with the mode flag pinned to 1.
    """

    def __init__(self, code: ParityCheckCode, y: np.ndarray, theta: float,
                 lam: float = 1.0, w: float = 1.0, noise=None):
        if not (0.0 < lam <= 1.0):
            raise ValueError("adaptation parameter must lie in (0, 1]")
        self.code = code
        self.y = np.asarray(y, dtype=np.float64)
        self.theta = float(theta)
        self.lam = float(lam)
        self.w = float(w)
        self.noise = noise

    def start(self, state: DecoderState) -> None:
        state.thetas = np.full(self.code.n, self.theta, dtype=np.float64)

    def step(self, state: DecoderState) -> None:
        q = self.noise.draw() if self.noise is not None else None
        e = inversions(self.code, state, self.y, self.w, q)
        mask = e < state.thetas
        flip_where(self.code, state, mask)
        if self.lam != 1.0:
            state.thetas[~mask] *= self.lam
