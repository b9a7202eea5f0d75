"""Stateful GSM full-rate encoder and decoder.

The arithmetic lives in :mod:`._kernels`; this module owns the state objects
and the array plumbing around them.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import LengthMismatch
from . import _kernels as k
from .frame import CodecFrame, check_params

FRAME_LEN = 160


def _zeros(n):
    return np.zeros(n, dtype=np.int64)


@dataclass
class EncoderState:
    # [z1, L_z2, mp]: offset compensation (2 values) and pre-emphasis memory.
    pre: np.ndarray = field(default_factory=lambda: _zeros(3))
    u: np.ndarray = field(default_factory=lambda: _zeros(8))
    larpp_prev: np.ndarray = field(default_factory=lambda: _zeros(8))
    # 120 reconstructed residual samples of history plus the current 160.
    dp0: np.ndarray = field(default_factory=lambda: _zeros(280))

    def reset(self) -> None:
        for arr in (self.pre, self.u, self.larpp_prev, self.dp0):
            arr[:] = 0

    def copy(self) -> "EncoderState":
        return EncoderState(self.pre.copy(), self.u.copy(), self.larpp_prev.copy(), self.dp0.copy())


@dataclass
class DecoderState:
    dp0: np.ndarray = field(default_factory=lambda: _zeros(160))
    nrp: np.ndarray = field(default_factory=lambda: np.array([40], dtype=np.int64))
    v: np.ndarray = field(default_factory=lambda: _zeros(9))
    larpp_prev: np.ndarray = field(default_factory=lambda: _zeros(8))
    msr: np.ndarray = field(default_factory=lambda: _zeros(1))

    def reset(self) -> None:
        for arr in (self.dp0, self.v, self.larpp_prev, self.msr):
            arr[:] = 0
        self.nrp[0] = 40

    def copy(self) -> "DecoderState":
        return DecoderState(self.dp0.copy(), self.nrp.copy(), self.v.copy(), self.larpp_prev.copy(), self.msr.copy())


def _frame_array(frame) -> np.ndarray:
    x = np.asarray(frame, dtype=np.int64)
    if x.shape != (FRAME_LEN,):
        raise LengthMismatch(f"a codec frame is {FRAME_LEN} samples, got {x.shape}")
    return x.copy()


def preprocess(frame, state: EncoderState) -> np.ndarray:
    """Offset compensation and pre-emphasis of one frame."""
    so = _zeros(FRAME_LEN)
    k.preprocess(_frame_array(frame), so, state.pre)
    return so


def lpc_analysis(frame) -> np.ndarray:
    """Eight LAR codes for a preprocessed frame."""
    larc = _zeros(8)
    k.lpc_analysis(_frame_array(frame), larc)
    return larc


def reflection_coefficients(frame) -> np.ndarray:
    """Q15 reflection coefficients of a preprocessed frame (analysis only)."""
    s = _frame_array(frame)
    acf = _zeros(9)
    r = _zeros(8)
    k.autocorrelation(s, acf)
    k.reflection_coefficients(acf, r)
    return r


def quantize_lars(lars) -> np.ndarray:
    larc = _zeros(8)
    k.quantize_lar(np.asarray(lars, dtype=np.int64), larc)
    return larc


def dequantize_lars(larc) -> np.ndarray:
    larpp = _zeros(8)
    k.decode_lar(np.asarray(larc, dtype=np.int64), larpp)
    return larpp


def lar_to_reflection(lars) -> np.ndarray:
    """Q15 reflection coefficients from (dequantized) LARs."""
    rp = _zeros(8)
    lars = np.asarray(lars, dtype=np.int64)
    k.interpolated_rp(lars, lars, 3, rp)
    return rp


def encode_frame(frame, state: EncoderState) -> CodecFrame:
    params = _zeros(76)
    k.encode_frame(_frame_array(frame), params, state.pre, state.u, state.larpp_prev, state.dp0)
    return CodecFrame.from_array(params)


def decode_frame(frame: CodecFrame, state: DecoderState) -> np.ndarray:
    params = frame.to_array()
    out = _zeros(FRAME_LEN)
    k.decode_frame(params, out, state.dp0, state.nrp, state.v, state.larpp_prev, state.msr)
    return out.astype(np.int16)


def encode_samples(samples, state: EncoderState | None = None) -> np.ndarray:
    """Encode a whole number of frames; returns a (K, 76) parameter array."""
    x = np.asarray(samples, dtype=np.int64)
    if x.ndim != 1 or len(x) % FRAME_LEN:
        raise LengthMismatch(f"signal length {len(x)} is not a multiple of {FRAME_LEN}")
    state = EncoderState() if state is None else state
    params = np.zeros((len(x) // FRAME_LEN, 76), dtype=np.int64)
    k.encode_frames(np.ascontiguousarray(x), params, state.pre, state.u, state.larpp_prev, state.dp0)
    return params


def decode_params(params, state: DecoderState | None = None) -> np.ndarray:
    """Decode a (K, 76) parameter array to K*160 int16 samples."""
    p = np.ascontiguousarray(np.asarray(params, dtype=np.int64).reshape(-1, 76))
    check_params(p)
    state = DecoderState() if state is None else state
    out = np.zeros(len(p) * FRAME_LEN, dtype=np.int64)
    k.decode_frames(p, out, state.dp0, state.nrp, state.v, state.larpp_prev, state.msr)
    return out.astype(np.int16)


def dequantized_lag(code: int, previous: int = 40) -> int:
    """Lag the decoder actually uses: out-of-range codes repeat the previous lag."""
    return previous if code < 40 or code > 120 else code


class Encoder:
    """Streaming encoder: 160-sample frames in, 33-byte frames out."""

    def __init__(self):
        self.state = EncoderState()

    def reset(self) -> None:
        self.state.reset()

    def encode(self, samples) -> bytes:
        from .frame import pack_frames

        return pack_frames(encode_samples(samples, self.state))


class Decoder:
    def __init__(self):
        self.state = DecoderState()

    def reset(self) -> None:
        self.state.reset()

    def decode(self, data: bytes) -> np.ndarray:
        from .frame import unpack_frames

        return decode_params(unpack_frames(data), self.state)
