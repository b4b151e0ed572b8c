"""Shared decode loop: state container, stopping rule, iteration accounting."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .codes import ParityCheckCode, bipolar_sign


@dataclass
class DecoderState:
    """Mutable per-frame decoder state, confined to a single frame worker.

    The syndrome vector ``s`` is kept consistent with ``x`` after every
    step (steppers either update it incrementally or recompute it).
    """

    x: np.ndarray                       # bipolar decisions, int8
    s: np.ndarray                       # bipolar syndromes, int8
    t: int = 0                          # executed iterations
    thetas: np.ndarray | None = None    # per-symbol thresholds (adaptive modes)
    u: np.ndarray | None = None         # per-symbol non-flip counters
    smooth: np.ndarray | None = None    # output-smoothing accumulators
    mu: int = 1                         # multi-bit/single-bit mode flag
    prev_objective: float | None = None


@dataclass
class DecodeResult:
    success: bool
    iterations: int
    decisions: np.ndarray
    objective_trace: list | None = None
    smoothing_engaged: bool = False


def init_state(code: ParityCheckCode, samples: np.ndarray) -> DecoderState:
    """Initialize decisions as the signs of the channel samples.

    A zero sample (possible only on the unquantized path) decides +1.
    """
    samples = np.asarray(samples, dtype=np.float64)
    if samples.shape[0] != code.n:
        raise ValueError(f"sample vector has length {samples.shape[0]}, code needs {code.n}")
    x = bipolar_sign(samples)
    return DecoderState(
        x=x,
        s=code.syndrome(x),
        u=np.zeros(code.n, dtype=np.int64),
        smooth=np.zeros(code.n, dtype=np.int32),
    )


def objective(code: ParityCheckCode, x: np.ndarray, y: np.ndarray) -> float:
    """Correlation-plus-syndrome objective: sum(x_k y_k) + sum(s_i).

    Uses whatever samples the calling decoder sees (saturated floats or
    quantized levels), so traces stay consistent with the flip decisions.
    """
    if len(x) != code.n or len(y) != code.n:
        raise ValueError("length mismatch")
    return float(np.asarray(x, dtype=np.float64) @ np.asarray(y, dtype=np.float64)
                 + code.syndrome(x).sum())


class Stepper:
    """One decoding strategy: mutates the state by a single iteration.

    Subclasses hold the code, the (possibly quantized) samples they decode
    against, and any per-frame noise source; they carry no mutable state
    shared across frames.
    """

    code: ParityCheckCode
    y: np.ndarray

    def start(self, state: DecoderState) -> None:  # pragma: no cover - default no-op
        pass

    def step(self, state: DecoderState) -> None:
        raise NotImplementedError

    def objective_of(self, state: DecoderState) -> float:
        return float(state.x @ self.y + state.s.sum())


def decode(stepper: Stepper, state: DecoderState, t_max: int, *,
           smoothing_window: int = 0, trace_objective: bool = False) -> DecodeResult:
    """Run the iterative decode loop with the all-checks-satisfied stop rule.

    The stopping rule is evaluated before every step, so a frame whose
    initial decisions already form a codeword succeeds with 0 iterations.
    ``iterations`` always counts executed steps.  When the iteration budget
    runs out and a smoothing window is configured, the terminal decision is
    the sign of the per-symbol accumulator (ties fall back to the current
    decision); otherwise it is the current decision vector.
    """
    if t_max < 1:
        raise ValueError("t_max must be at least 1")
    if smoothing_window < 0 or smoothing_window > t_max:
        raise ValueError("smoothing window must lie in [0, t_max]")

    stepper.start(state)
    trace = [stepper.objective_of(state)] if trace_objective else None
    engaged = False

    for _ in range(t_max):
        if state.s.min() == 1:
            return DecodeResult(True, state.t, state.x.copy(), trace, engaged)
        stepper.step(state)
        state.t += 1
        if smoothing_window and state.t > t_max - smoothing_window:
            state.smooth += state.x
            engaged = True
        if trace is not None:
            trace.append(stepper.objective_of(state))

    if state.s.min() == 1:
        return DecodeResult(True, state.t, state.x.copy(), trace, engaged)

    if smoothing_window and engaged:
        decisions = smoothed_decision(state.smooth, state.x)
    else:
        decisions = state.x.copy()
    return DecodeResult(False, state.t, decisions, trace, engaged)


def smoothed_decision(smooth: np.ndarray, x: np.ndarray) -> np.ndarray:
    """sign(X_k) of the accumulators; an exact tie keeps the current bit."""
    return np.where(smooth > 0, 1, np.where(smooth < 0, -1, x)).astype(np.int8)
