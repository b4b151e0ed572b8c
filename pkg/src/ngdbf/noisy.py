"""Noise-perturbed bit-flip decoding: parameters, noise policies, the
quantized datapath with precomputed threshold-adaptation events, and the
per-symbol flip decision in both direct and pre-scaled forms.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .channel import QuantizerSpec
from .codes import ParityCheckCode
from .core import DecoderState, Stepper
from .gdbf import AdaptiveThresholdStepper, SingleFlipStepper, flip_where

NOISE_POLICIES = ("iid", "shift_chain", "uniform")


@dataclass(frozen=True)
class NgdbfParams:
    """Knobs for the noisy decoders.

    ``eta`` scales the perturbation standard deviation relative to the
    channel noise (std = eta * channel sigma); eta = 0 is the degenerate
    noiseless setting used for equivalence checks.  ``lam`` = 1 disables
    threshold adaptation.  A positive ``smoothing_window`` turns on output
    smoothing over that many final iterations.
    """

    theta: float = -0.9
    lam: float = 1.0
    eta: float = 1.0
    w: float = 0.75
    t_max: int = 100
    smoothing_window: int = 0
    noise_policy: str = "iid"

    def __post_init__(self):
        if self.theta >= 0:
            raise ValueError("inversion threshold must be negative")
        if not (0.0 < self.lam <= 1.0):
            raise ValueError("adaptation parameter must lie in (0, 1]")
        if not (0.0 <= self.eta <= 1.0):
            raise ValueError("noise scale must lie in [0, 1]")
        if self.w <= 0:
            raise ValueError("syndrome weight must be positive")
        if self.t_max < 1:
            raise ValueError("iteration limit must be at least 1")
        if not (0 <= self.smoothing_window <= self.t_max):
            raise ValueError("smoothing window must lie in [0, t_max]")
        if self.noise_policy not in NOISE_POLICIES:
            raise ValueError(f"unknown noise policy {self.noise_policy!r}")

    def replace(self, **kw) -> "NgdbfParams":
        from dataclasses import replace
        return replace(self, **kw)


class NoiseSource:
    """Per-frame perturbation generator.

    Policies:

    - ``iid``: n fresh independent Gaussian draws per iteration.
    - ``shift_chain``: a single Gaussian generator feeding a length-n shift
      register; the register is preloaded on the first draw and afterwards
      one fresh sample enters at position 0 per iteration, so
      q(t+1)[k] = q(t)[k-1] for k >= 1.
    - ``uniform``: i.i.d. uniform on [-sqrt(3)*sigma, +sqrt(3)*sigma],
      which matches the Gaussian variance.
    """

    def __init__(self, n: int, sigma: float, policy: str, rng: np.random.Generator):
        if policy not in NOISE_POLICIES:
            raise ValueError(f"unknown noise policy {policy!r}")
        if sigma < 0:
            raise ValueError("sigma must be non-negative")
        self.n = n
        self.sigma = float(sigma)
        self.policy = policy
        self.rng = rng
        self._chain: np.ndarray | None = None

    def draw(self) -> np.ndarray:
        if self.policy == "iid":
            return self.sigma * self.rng.standard_normal(self.n)
        if self.policy == "uniform":
            a = np.sqrt(3.0) * self.sigma
            return self.rng.uniform(-a, a, self.n)
        if self._chain is None:
            self._chain = self.sigma * self.rng.standard_normal(self.n)
        else:
            fresh = self.sigma * self.rng.standard_normal(1)
            self._chain = np.concatenate((fresh, self._chain[:-1]))
        return self._chain.copy()


def _noise_or_none(code: ParityCheckCode, params: NgdbfParams, channel_sigma: float,
                   rng: np.random.Generator | None) -> NoiseSource | None:
    if params.eta == 0.0:
        return None
    if rng is None:
        raise ValueError("a random generator is required when eta > 0")
    return NoiseSource(code.n, params.eta * channel_sigma, params.noise_policy, rng)


def sngdbf_stepper(code: ParityCheckCode, y: np.ndarray, params: NgdbfParams,
                   channel_sigma: float, rng: np.random.Generator | None) -> SingleFlipStepper:
    """Single-bit noisy stepper: argmin flip on the perturbed metric."""
    return SingleFlipStepper(code, y, w=params.w,
                             noise=_noise_or_none(code, params, channel_sigma, rng))


def mngdbf_stepper(code: ParityCheckCode, y: np.ndarray, params: NgdbfParams,
                   channel_sigma: float, rng: np.random.Generator | None) -> AdaptiveThresholdStepper:
    """Multi-bit noisy stepper with per-symbol threshold adaptation.

    lam = 1 yields the non-adaptive variant (fixed threshold, no mode
    switching); the smoothed variant is the same stepper run with a
    positive smoothing window in :func:`ngdbf.core.decode`.
    """
    return AdaptiveThresholdStepper(code, y, theta=params.theta, lam=params.lam, w=params.w,
                                    noise=_noise_or_none(code, params, channel_sigma, rng))


# ---------------------------------------------------------------------------
# Quantized datapath
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AdaptationTable:
    """Precomputed threshold-adaptation events (theta_level, tau).

    The threshold active at non-flip count u is the level of the last event
    with tau <= u.  Events are strictly increasing in tau and the levels
    move strictly toward zero.
    """

    levels: tuple
    taus: tuple

    def __post_init__(self):
        if len(self.levels) != len(self.taus) or not self.levels:
            raise ValueError("events must be a non-empty list of (level, tau) pairs")
        if self.taus[0] != 0:
            raise ValueError("first adaptation event must occur at tau = 0")
        if any(b <= a for a, b in zip(self.taus, self.taus[1:])):
            raise ValueError("event counts must be strictly increasing")
        if any(b <= a for a, b in zip(self.levels, self.levels[1:])):
            raise ValueError("threshold levels must move strictly toward zero")

    def threshold_for(self, u):
        """Active threshold level(s) for non-flip count(s) u."""
        taus = np.asarray(self.taus)
        idx = np.searchsorted(taus, np.asarray(u), side="right") - 1
        out = np.asarray(self.levels)[idx]
        return float(out) if np.isscalar(u) else out

    def rows(self):
        return [(i, lvl, tau) for i, (lvl, tau) in enumerate(zip(self.levels, self.taus))]


def build_adaptation_table(theta: float, lam: float, quantizer: QuantizerSpec,
                           t_max: int) -> AdaptationTable:
    """Scan u = 0..t_max and record every change of the quantized threshold.

    The threshold trajectory is theta * lam**u pushed through the quantizer;
    lam = 1 degenerates to the single event at u = 0.
    """
    if theta >= 0:
        raise ValueError("inversion threshold must be negative")
    if not (0.0 < lam <= 1.0):
        raise ValueError("adaptation parameter must lie in (0, 1]")
    levels = [quantizer.quantize(theta)]
    taus = [0]
    if lam < 1.0:
        for u in range(1, t_max + 1):
            v = quantizer.quantize(theta * lam ** u)
            if v != levels[-1]:
                levels.append(v)
                taus.append(u)
    return AdaptationTable(levels=tuple(levels), taus=tuple(taus))


def flip_decisions_direct(x, y_idx, q_idx, theta_idx, w_idx, syndrome_sums) -> np.ndarray:
    """delta_k = sign(E_k - theta_k) on the integer (half-step) datapath.

    All quantized quantities are signed odd integers in units of step/2.
    sign(0) is +1, so a metric exactly on the threshold does not flip.
    """
    lhs = (np.asarray(x, dtype=np.int64) * y_idx + int(w_idx) * np.asarray(syndrome_sums, dtype=np.int64)
           + q_idx - theta_idx)
    return np.where(lhs >= 0, 1, -1).astype(np.int8)


def flip_decisions_prescaled(x, y_idx, q_idx, theta_idx, w_idx, syndrome_sums) -> np.ndarray:
    """The same decision evaluated the way the hardware adder sees it.

    Channel sample, perturbation and threshold are pre-scaled by the
    reciprocal of the quantized weight so the syndrome inputs stay
    unweighted; exact rational arithmetic keeps the comparison free of
    rounding, which makes the two formulations agree everywhere, including
    on the exact-threshold boundary.
    """
    w = int(w_idx)
    x = np.asarray(x)
    y_idx = np.asarray(y_idx)
    q_idx = np.asarray(q_idx)
    theta_idx = np.asarray(theta_idx)
    s = np.asarray(syndrome_sums)
    out = np.empty(len(x), dtype=np.int8)
    for k in range(len(x)):
        scaled = (Fraction(int(x[k]) * int(y_idx[k]), w)
                  + Fraction(int(q_idx[k]), w)
                  - Fraction(int(theta_idx[k]), w)
                  + int(s[k]))
        out[k] = 1 if scaled >= 0 else -1
    return out


class QuantizedAdaptiveStepper(Stepper):
    """Multi-bit noisy stepper on the quantized integer datapath.

    Thresholds are driven by per-symbol non-flip counters through the
    adaptation-event table instead of per-iteration multiplies.
    """

    def __init__(self, code: ParityCheckCode, quantizer: QuantizerSpec, y: np.ndarray,
                 params: NgdbfParams, channel_sigma: float, rng: np.random.Generator | None,
                 table: AdaptationTable | None = None):
        self.code = code
        self.quantizer = quantizer
        self.y_idx = quantizer.to_index(y)
        self.y = quantizer.from_index(self.y_idx)
        self.w_idx = int(quantizer.to_index(params.w))
        if table is None:
            table = build_adaptation_table(params.theta, params.lam, quantizer, params.t_max)
        self.theta_idx = quantizer.to_index(np.asarray(table.levels))
        self.taus = np.asarray(table.taus, dtype=np.int64)
        self.noise = _noise_or_none(code, params, channel_sigma, rng)

    def step(self, state: DecoderState) -> None:
        if self.noise is not None:
            q_idx = self.quantizer.to_index(self.noise.draw())
        else:
            q_idx = np.zeros(self.code.n, dtype=np.int64)
        th = self.theta_idx[np.searchsorted(self.taus, state.u, side="right") - 1]
        delta = flip_decisions_direct(state.x, self.y_idx, q_idx, th, self.w_idx,
                                      self.code.syndrome_sums(state.s))
        mask = delta < 0
        flip_where(self.code, state, mask)
        state.u[~mask] += 1
