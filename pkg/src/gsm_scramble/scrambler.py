"""Keyed sub-frame permutation with per-sub-frame inversion.

A super-frame of ``N`` sub-frames is rearranged so that output sub-frame ``i``
is input sub-frame ``perm[i]``, reversed in time (or negated, in ``sign``
mode) when ``invert_flags[i]`` is set.  The table driving this is drawn from a
keyed byte stream with an unbiased Fisher-Yates shuffle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import BadVersion, LengthMismatch, NotAPermutation, TableError, Truncated

__all__ = [
    "ScrambleConfig",
    "PermutationTable",
    "generate_table",
    "identity_table",
    "scramble",
    "descramble",
    "serialize_table",
    "deserialize_table",
]

TABLE_VERSION = 0x01
INVERSION_MODES = ("time", "sign")


DEFAULT_SUB_FRAME_LEN = 960
DEFAULT_FRAMES_PER_SUPER = 16


@dataclass(frozen=True)
class ScrambleConfig:
    """Scrambling geometry.

    The default sub-frame spans six codec frames (120 ms).  Shorter sub-frames
    scramble more finely but every sub-frame boundary costs the vocoder a
    mismatched predictor history; at one codec frame per sub-frame the
    recovered speech loses 3.5-8 dB of segmental SNR against a plain codec
    pass, at six it stays within about 2 dB.
    """

    sub_frame_len: int = DEFAULT_SUB_FRAME_LEN
    frames_per_super: int = DEFAULT_FRAMES_PER_SUPER
    inversion_mode: str = "time"

    def __post_init__(self):
        if self.sub_frame_len <= 0 or self.sub_frame_len % 160:
            raise ValueError("sub_frame_len must be a positive multiple of 160")
        if not 1 <= self.frames_per_super <= 256:
            raise ValueError("frames_per_super must be in [1, 256]")
        if self.inversion_mode not in INVERSION_MODES:
            raise ValueError(f"inversion_mode must be one of {INVERSION_MODES}")

    @property
    def superframe_len(self) -> int:
        return self.sub_frame_len * self.frames_per_super


@dataclass(frozen=True)
class PermutationTable:
    perm: tuple[int, ...]
    invert_flags: tuple[bool, ...]
    superframe_index: int = 0

    def __post_init__(self):
        object.__setattr__(self, "perm", tuple(int(p) for p in self.perm))
        object.__setattr__(self, "invert_flags", tuple(bool(f) for f in self.invert_flags))
        n = len(self.perm)
        if len(self.invert_flags) != n:
            raise ValueError("perm and invert_flags differ in length")
        if sorted(self.perm) != list(range(n)):
            raise NotAPermutation(f"not a permutation of 0..{n - 1}: {self.perm}")
        if self.superframe_index < 0:
            raise ValueError("superframe_index must be non-negative")

    @property
    def size(self) -> int:
        return len(self.perm)


def identity_table(n: int, superframe_index: int = 0) -> PermutationTable:
    return PermutationTable(tuple(range(n)), (False,) * n, superframe_index)


def _uniform_below(stream: Iterator[int], bound: int) -> int:
    # Rejection keeps every residue mod ``bound`` equally likely.
    limit = 256 - 256 % bound
    while True:
        b = next(stream)
        if b < limit:
            return b % bound


def generate_table(keystream: Iterator[int], superframe_index: int, config: ScrambleConfig) -> PermutationTable:
    """Draw a permutation table from ``keystream``.

    Fisher-Yates runs from ``i = N-1`` down to 1, each swap partner drawn by
    byte rejection sampling; then ``ceil(N/8)`` bytes supply the inversion
    flags, least significant bit first.
    """
    n = config.frames_per_super
    stream = iter(keystream)
    perm = list(range(n))
    for i in range(n - 1, 0, -1):
        j = _uniform_below(stream, i + 1)
        perm[i], perm[j] = perm[j], perm[i]
    flag_bytes = [next(stream) for _ in range((n + 7) // 8)]
    flags = [bool((flag_bytes[k >> 3] >> (k & 7)) & 1) for k in range(n)]
    return PermutationTable(tuple(perm), tuple(flags), superframe_index)


def _as_subframes(superframe, table: PermutationTable) -> np.ndarray:
    x = np.asarray(superframe)
    n = table.size
    if x.ndim != 1 or n == 0 or len(x) % n:
        raise LengthMismatch(f"super-frame of {len(x)} samples does not split into {n} sub-frames")
    return x.reshape(n, -1)


def _invert(blocks: np.ndarray, flags: np.ndarray, mode: str) -> np.ndarray:
    out = blocks.copy()
    if mode == "time":
        out[flags] = out[flags, ::-1]
    else:
        # Wrapping negation is an involution on int16, including -32768.
        out[flags] = np.negative(out[flags])
    return out


def scramble(superframe, table: PermutationTable, mode: str = "time") -> np.ndarray:
    """Return the scrambled copy of ``superframe`` (length ``N * L``)."""
    blocks = _as_subframes(superframe, table)
    moved = blocks[np.asarray(table.perm)]
    return _invert(moved, np.asarray(table.invert_flags, dtype=bool), mode).reshape(-1)


def descramble(superframe, table: PermutationTable, mode: str = "time") -> np.ndarray:
    """Exact inverse of :func:`scramble` for the same table and mode."""
    blocks = _as_subframes(superframe, table)
    restored = _invert(blocks, np.asarray(table.invert_flags, dtype=bool), mode)
    out = np.empty_like(restored)
    out[np.asarray(table.perm)] = restored
    return out.reshape(-1)


def serialize_table(table: PermutationTable, config: ScrambleConfig | None = None) -> bytes:
    """Wire layout: version, N-1, perm bytes, then LSB-first flag bytes."""
    n = table.size
    if not 1 <= n <= 256:
        raise ValueError("table size must be in [1, 256]")
    if config is not None and config.frames_per_super != n:
        raise LengthMismatch("table size disagrees with config.frames_per_super")
    flags = bytearray((n + 7) // 8)
    for k, f in enumerate(table.invert_flags):
        if f:
            flags[k >> 3] |= 1 << (k & 7)
    return bytes([TABLE_VERSION, n - 1, *table.perm]) + bytes(flags)


def deserialize_table(data: bytes, superframe_index: int = 0) -> PermutationTable:
    data = bytes(data)
    if len(data) < 2:
        raise Truncated("table shorter than its 2-byte preamble")
    if data[0] != TABLE_VERSION:
        raise BadVersion(f"unknown table version 0x{data[0]:02x}")
    n = data[1] + 1
    need = 2 + n + (n + 7) // 8
    if len(data) < need:
        raise Truncated(f"table needs {need} bytes, got {len(data)}")
    if len(data) > need:
        raise TableError(f"{len(data) - need} trailing bytes after table")
    perm = data[2 : 2 + n]
    if any(p >= n for p in perm) or len(set(perm)) != n:
        raise NotAPermutation("duplicate or out-of-range index")
    fb = data[2 + n :]
    flags = tuple(bool((fb[k >> 3] >> (k & 7)) & 1) for k in range(n))
    return PermutationTable(tuple(perm), flags, superframe_index)


def scramble_signal(samples: Sequence[int], tables: Sequence[PermutationTable], mode: str = "time") -> np.ndarray:
    """Scramble consecutive super-frames of ``samples``, one table each."""
    x = np.asarray(samples)
    if not tables:
        return x.copy()
    parts = np.split(x, len(tables))
    return np.concatenate([scramble(p, t, mode) for p, t in zip(parts, tables)])
