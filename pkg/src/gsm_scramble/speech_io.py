"""Reading, writing and frame alignment of 8 kHz 16-bit mono PCM."""

from __future__ import annotations

import os
import struct
from dataclasses import dataclass, field

import numpy as np

from .errors import NotWav, UnsupportedFormat

SAMPLE_RATE = 8000

__all__ = ["SAMPLE_RATE", "PcmSignal", "read_wav", "write_wav", "pad_to_superframe"]


@dataclass(eq=False)
class PcmSignal:
    """Mono 16-bit speech at 8 kHz."""

    samples: np.ndarray
    sample_rate_hz: int = field(default=SAMPLE_RATE)

    def __post_init__(self):
        if self.sample_rate_hz != SAMPLE_RATE:
            raise UnsupportedFormat(f"sample rate must be {SAMPLE_RATE} Hz, got {self.sample_rate_hz}")
        samples = np.asarray(self.samples)
        if samples.ndim != 1:
            raise ValueError("samples must be one-dimensional")
        if samples.dtype != np.int16:
            if samples.size and (samples.min() < -32768 or samples.max() > 32767):
                raise ValueError("samples outside the signed 16-bit range")
            samples = samples.astype(np.int16)
        self.samples = samples

    def __len__(self) -> int:
        return len(self.samples)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PcmSignal):
            return NotImplemented
        return self.sample_rate_hz == other.sample_rate_hz and np.array_equal(self.samples, other.samples)

    @property
    def duration_s(self) -> float:
        return len(self.samples) / self.sample_rate_hz


def read_wav(path: str | os.PathLike) -> PcmSignal:
    """Load a RIFF/WAVE file holding 8 kHz, 16-bit, mono, PCM (format 1) audio."""
    with open(path, "rb") as fh:
        data = fh.read()
    if len(data) < 12 or data[:4] != b"RIFF" or data[8:12] != b"WAVE":
        raise NotWav(f"{path}: missing RIFF/WAVE signature")

    fmt = None
    pcm = None
    pos = 12
    while pos + 8 <= len(data):
        cid, size = struct.unpack_from("<4sI", data, pos)
        body = data[pos + 8 : pos + 8 + size]
        if cid == b"fmt ":
            if size < 16 or len(body) < 16:
                raise NotWav(f"{path}: short fmt chunk")
            fmt = struct.unpack_from("<HHIIHH", body)
        elif cid == b"data":
            if len(body) < size:
                raise NotWav(f"{path}: data chunk truncated")
            pcm = body
        pos += 8 + size + (size & 1)

    if fmt is None or pcm is None:
        raise NotWav(f"{path}: missing fmt or data chunk")
    codec, channels, rate, _, _, bits = fmt
    if codec != 1 or channels != 1 or rate != SAMPLE_RATE or bits != 16:
        raise UnsupportedFormat(
            f"{path}: need PCM/mono/8000 Hz/16-bit, got codec={codec} channels={channels} "
            f"rate={rate} bits={bits}"
        )
    if len(pcm) % 2:
        raise NotWav(f"{path}: odd-sized 16-bit data chunk")
    return PcmSignal(np.frombuffer(pcm, dtype="<i2").astype(np.int16))


def write_wav(signal: PcmSignal, path: str | os.PathLike) -> None:
    """Write ``signal`` with the canonical 44-byte PCM header."""
    pcm = np.asarray(signal.samples, dtype="<i2").tobytes()
    header = struct.pack(
        "<4sI4s4sIHHIIHH4sI",
        b"RIFF", 36 + len(pcm), b"WAVE",
        b"fmt ", 16, 1, 1, SAMPLE_RATE, SAMPLE_RATE * 2, 2, 16,
        b"data", len(pcm),
    )
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(pcm)


def pad_to_superframe(signal: PcmSignal, sub_frame_len: int, frames_per_super: int) -> tuple[PcmSignal, int]:
    """Zero-pad to a whole number of super-frames; also return the original length."""
    if sub_frame_len <= 0 or frames_per_super <= 0:
        raise ValueError("sub_frame_len and frames_per_super must be positive")
    n = len(signal.samples)
    unit = sub_frame_len * frames_per_super
    padded = -(-n // unit) * unit
    if padded == n:
        return signal, n
    out = np.zeros(padded, dtype=np.int16)
    out[:n] = signal.samples
    return PcmSignal(out), n
