"""Codec frame parameters and their 33-byte packed form."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import BadMagic, InvalidFrame, LengthMismatch

FRAME_BYTES = 33
PAYLOAD_BITS = 260
MAGIC = 0xD

LAR_BITS = (6, 6, 5, 5, 4, 4, 3, 3)
SUB_BITS = (7, 2, 2, 6) + (3,) * 13

# Bit width of every entry of the 76-long parameter vector, in wire order.
FIELD_BITS = np.array(LAR_BITS + SUB_BITS * 4, dtype=np.int64)
assert FIELD_BITS.sum() == PAYLOAD_BITS


def _bit_layout():
    widths = np.concatenate([[4], FIELD_BITS])
    field = np.repeat(np.arange(len(widths)), widths)
    # MSB first inside each field.
    shift = np.concatenate([np.arange(w - 1, -1, -1) for w in widths])
    return field, shift


_FIELD_OF_BIT, _SHIFT_OF_BIT = _bit_layout()
_FIELD_MAX = (1 << FIELD_BITS) - 1


@dataclass(frozen=True)
class SubFrameParams:
    ltp_lag: int
    ltp_gain: int
    grid_position: int
    block_max: int
    rpe_pulses: tuple[int, ...]


@dataclass(frozen=True)
class CodecFrame:
    """The 76 quantized parameters of one 20 ms frame."""

    lar_codes: tuple[int, ...]
    sub_params: tuple[SubFrameParams, ...]

    def __post_init__(self):
        check_params(self.to_array())

    def to_array(self) -> np.ndarray:
        out = list(self.lar_codes)
        for sp in self.sub_params:
            out += [sp.ltp_lag, sp.ltp_gain, sp.grid_position, sp.block_max, *sp.rpe_pulses]
        return np.array(out, dtype=np.int64)

    @classmethod
    def from_array(cls, params) -> "CodecFrame":
        p = [int(v) for v in np.asarray(params).reshape(-1)]
        if len(p) != len(FIELD_BITS):
            raise InvalidFrame(f"expected {len(FIELD_BITS)} parameters, got {len(p)}")
        subs = []
        for k in range(4):
            b = 8 + 17 * k
            subs.append(SubFrameParams(p[b], p[b + 1], p[b + 2], p[b + 3], tuple(p[b + 4 : b + 17])))
        return cls(tuple(p[:8]), tuple(subs))

    @property
    def bit_count(self) -> int:
        return PAYLOAD_BITS


def check_params(params: np.ndarray) -> None:
    p = np.asarray(params)
    if p.shape[-1] != len(FIELD_BITS):
        raise InvalidFrame(f"expected {len(FIELD_BITS)} parameters, got {p.shape[-1]}")
    if np.any(p < 0) or np.any(p > _FIELD_MAX):
        raise InvalidFrame("parameter outside its bit width")


def pack_frames(params: np.ndarray) -> bytes:
    """Pack a (K, 76) parameter array into K concatenated 33-byte frames."""
    p = np.asarray(params, dtype=np.int64)
    check_params(p)
    p = p.reshape(-1, len(FIELD_BITS))
    ext = np.concatenate([np.full((len(p), 1), MAGIC, dtype=np.int64), p], axis=1)
    bits = (ext[:, _FIELD_OF_BIT] >> _SHIFT_OF_BIT) & 1
    return np.packbits(bits.astype(np.uint8), axis=1).tobytes()


def unpack_frames(data: bytes) -> np.ndarray:
    """Inverse of :func:`pack_frames`; returns a (K, 76) int64 array."""
    if len(data) % FRAME_BYTES:
        raise LengthMismatch(f"{len(data)} bytes is not a whole number of {FRAME_BYTES}-byte frames")
    raw = np.frombuffer(bytes(data), dtype=np.uint8).reshape(-1, FRAME_BYTES)
    if np.any(raw[:, 0] >> 4 != MAGIC):
        raise BadMagic("frame does not start with the 0xD nibble")
    bits = np.unpackbits(raw, axis=1).astype(np.int64)
    weighted = bits << _SHIFT_OF_BIT
    starts = np.concatenate([[0], np.cumsum(np.concatenate([[4], FIELD_BITS]))[:-1]])
    fields = np.add.reduceat(weighted, starts, axis=1)
    return fields[:, 1:]


def pack_frame(frame: CodecFrame) -> bytes:
    return pack_frames(frame.to_array()[None, :])


def unpack_frame(data: bytes) -> CodecFrame:
    if len(data) != FRAME_BYTES:
        raise LengthMismatch(f"a packed frame is {FRAME_BYTES} bytes, got {len(data)}")
    return CodecFrame.from_array(unpack_frames(data)[0])


# What the encoder emits for digital silence: LARs quantized at zero, minimum
# gain and block maximum, every pulse at the mid level 4.  Note the all-zero
# code vector is NOT silent; code 0 is the most negative quantizer level.
SILENCE_PARAMS = np.array(
    [32, 32, 20, 11, 8, 5, 3, 2] + ([40, 0, 0, 0] + [4] * 13) * 4, dtype=np.int64
)


def silence_frame() -> CodecFrame:
    return CodecFrame.from_array(SILENCE_PARAMS)


def zero_frame() -> CodecFrame:
    return CodecFrame.from_array(np.zeros(len(FIELD_BITS), dtype=np.int64))
