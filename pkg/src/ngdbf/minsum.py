"""Strict min-sum reference decoder (flooding schedule, double precision).

Check update: sign product times minimum magnitude over the extrinsic
inputs.  Variable update: channel sample plus extrinsic sums; raw samples
are used directly since min-sum is invariant to a positive scaling of its
inputs, and no saturation or offset/normalization is applied.
"""

from __future__ import annotations

import numpy as np

from .codes import ParityCheckCode, bipolar_sign
from .core import DecodeResult


def decode_minsum(code: ParityCheckCode, y: np.ndarray, t_max: int) -> DecodeResult:
    """Flooding min-sum with the all-checks-satisfied stopping rule.

    The stopping rule is evaluated on the hard decisions before every
    message-passing pass, matching the iteration accounting of the
    bit-flip decoders (a frame whose channel signs already form a codeword
    reports 0 iterations).
    """
    if t_max < 1:
        raise ValueError("t_max must be at least 1")
    y = np.asarray(y, dtype=np.float64)
    if y.shape[0] != code.n:
        raise ValueError(f"sample vector has length {y.shape[0]}, code needs {code.n}")

    row_ptr = code._row_ptr
    row_sym = code._row_sym
    row_deg = code._row_deg
    col_ptr = code._col_ptr
    col_deg = code._col_deg
    perm = code._row_to_col_perm
    sym_per_col_edge = np.repeat(np.arange(code.n), col_deg)

    v2c = y[row_sym].copy()          # variable-to-check, row-major edge order
    x = bipolar_sign(y)

    for t in range(t_max + 1):
        if code.is_codeword(x):
            return DecodeResult(True, t, x.copy())
        if t == t_max:
            break

        # Check pass: extrinsic sign product and min magnitude per edge.
        signs = np.where(v2c >= 0, 1.0, -1.0)
        mags = np.abs(v2c)
        sign_prod = np.multiply.reduceat(signs, row_ptr[:-1])
        m1 = np.minimum.reduceat(mags, row_ptr[:-1])
        m1e = np.repeat(m1, row_deg)
        at_min = mags == m1e
        n_min = np.repeat(np.add.reduceat(at_min.astype(np.int32), row_ptr[:-1]), row_deg)
        m2 = np.minimum.reduceat(np.where(at_min, np.inf, mags), row_ptr[:-1])
        ext_mag = np.where(at_min & (n_min == 1), np.repeat(m2, row_deg), m1e)
        c2v = np.repeat(sign_prod, row_deg) * signs * ext_mag

        # Variable pass: posteriors, extrinsic messages, hard decisions.
        c2v_col = c2v[perm]
        posterior = y + np.add.reduceat(c2v_col, col_ptr[:-1])
        v2c_col = posterior[sym_per_col_edge] - c2v_col
        v2c[perm] = v2c_col
        x = bipolar_sign(posterior)

    return DecodeResult(False, t_max, x.copy())
