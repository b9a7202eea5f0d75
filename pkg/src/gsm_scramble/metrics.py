"""Objective comparisons between original, scrambled and recovered speech."""

from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass

import numpy as np
from scipy import signal as sps

from .errors import BadWindow, LengthMismatch, SilentInput
from .speech_io import SAMPLE_RATE, PcmSignal

SEGMENT_LEN = 160
SNR_FLOOR_DB = -10.0
SNR_CEIL_DB = 35.0
ACTIVE_RMS = 100.0
EPS = 1e-10

__all__ = [
    "SegmentalSnrReport",
    "Spectrogram",
    "segmental_snr",
    "max_normalized_cross_correlation",
    "fft_radix2",
    "spectrogram",
    "export_overlay_csv",
    "export_spectrogram_csv",
    "read_overlay_csv",
    "read_spectrogram_csv",
]


def _samples(x) -> np.ndarray:
    if isinstance(x, PcmSignal):
        x = x.samples
    return np.asarray(x, dtype=np.float64)


@dataclass
class SegmentalSnrReport:
    per_segment_db: np.ndarray
    mean_db: float
    active_segments: int
    total_segments: int


def segmental_snr(reference, test) -> SegmentalSnrReport:
    """Per-160-sample SNR, clamped to [-10, 35] dB, averaged over active segments.

    A segment is active when the reference RMS is at least 100.  ``mean_db``
    is NaN when no segment is active.
    """
    x, y = _samples(reference), _samples(test)
    if len(x) != len(y):
        raise LengthMismatch(f"reference has {len(x)} samples, test has {len(y)}")
    n_seg = -(-len(x) // SEGMENT_LEN)
    pad = n_seg * SEGMENT_LEN - len(x)
    x = np.pad(x, (0, pad)).reshape(n_seg, SEGMENT_LEN)
    y = np.pad(y, (0, pad)).reshape(n_seg, SEGMENT_LEN)
    sig = (x * x).sum(axis=1)
    err = ((x - y) ** 2).sum(axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        db = 10.0 * np.log10(sig / err)
    db = np.where(err == 0, SNR_CEIL_DB, db)
    db = np.clip(np.nan_to_num(db, neginf=SNR_FLOOR_DB), SNR_FLOOR_DB, SNR_CEIL_DB)

    lengths = np.full(n_seg, SEGMENT_LEN)
    if pad:
        lengths[-1] = SEGMENT_LEN - pad
    active = np.sqrt(sig / np.maximum(lengths, 1)) >= ACTIVE_RMS
    mean = float(db[active].mean()) if active.any() else math.nan
    return SegmentalSnrReport(db, mean, int(active.sum()), n_seg)


def max_normalized_cross_correlation(a, b, max_lag: int = 160) -> float:
    """Largest ``|sum a[n] b[n+lag]| / sqrt(sum a^2 * sum b^2)`` over ``|lag| <= max_lag``."""
    x, y = _samples(a), _samples(b)
    ex, ey = float(np.dot(x, x)), float(np.dot(y, y))
    if ex == 0.0 or ey == 0.0:
        raise SilentInput("cross-correlation needs two non-silent signals")
    if max_lag < 0:
        raise ValueError("max_lag must be non-negative")
    full = sps.correlate(y, x, mode="full")
    lags = np.arange(len(full)) - (len(x) - 1)
    window = np.abs(lags) <= max_lag
    if not window.any():
        return 0.0
    return float(np.abs(full[window]).max() / math.sqrt(ex * ey))


def fft_radix2(frames: np.ndarray) -> np.ndarray:
    """Iterative decimation-in-time FFT along the last axis (power-of-two length)."""
    x = np.asarray(frames, dtype=np.complex128)
    n = x.shape[-1]
    if n & (n - 1) or n == 0:
        raise BadWindow(f"transform length {n} is not a power of two")
    bits = n.bit_length() - 1
    idx = np.arange(n)
    rev = np.zeros(n, dtype=np.int64)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    x = x[..., rev]
    size = 2
    while size <= n:
        half = size // 2
        tw = np.exp(-2j * np.pi * np.arange(half) / size)
        blocks = x.reshape(x.shape[:-1] + (n // size, size))
        even = blocks[..., :half]
        odd = blocks[..., half:] * tw
        x = np.concatenate([even + odd, even - odd], axis=-1).reshape(x.shape)
        size *= 2
    return x


@dataclass
class Spectrogram:
    magnitudes_db: np.ndarray  # (frames, window_len // 2 + 1)
    window_len: int
    hop_len: int
    sample_rate_hz: int = SAMPLE_RATE

    @property
    def bin_hz(self) -> np.ndarray:
        return np.arange(self.window_len // 2 + 1) * self.sample_rate_hz / self.window_len


def _frames(x: np.ndarray, window_len: int, hop_len: int) -> np.ndarray:
    if len(x) == 0:
        return np.zeros((0, window_len))
    n = 1 + -(-max(len(x) - window_len, 0) // hop_len)
    x = np.pad(x, (0, (n - 1) * hop_len + window_len - len(x)))
    idx = np.arange(window_len)[None, :] + hop_len * np.arange(n)[:, None]
    return x[idx]


def spectrogram(signal, window_len: int = 256, hop_len: int = 128) -> Spectrogram:
    """Hann-windowed STFT magnitude in dB, ``20 log10(|X| + 1e-10)``.

    The last frame is zero-padded so every sample is covered.
    """
    if window_len < 2 or window_len & (window_len - 1):
        raise BadWindow("window_len must be a power of two >= 2")
    if not 0 < hop_len <= window_len:
        raise BadWindow("hop_len must be in (0, window_len]")
    frames = _frames(_samples(signal), window_len, hop_len) * np.hanning(window_len)
    spec = fft_radix2(frames)[:, : window_len // 2 + 1]
    return Spectrogram(20.0 * np.log10(np.abs(spec) + EPS), window_len, hop_len)


def export_overlay_csv(original, synthesized, path: str | os.PathLike) -> None:
    x = np.asarray(original.samples if isinstance(original, PcmSignal) else original)
    y = np.asarray(synthesized.samples if isinstance(synthesized, PcmSignal) else synthesized)
    if len(x) != len(y):
        raise LengthMismatch(f"original has {len(x)} samples, synthesized has {len(y)}")
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["index", "original", "synthesized"])
        w.writerows(zip(range(len(x)), x.tolist(), y.tolist()))


def read_overlay_csv(path: str | os.PathLike) -> tuple[np.ndarray, np.ndarray]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    body = np.array(rows[1:], dtype=np.int64).reshape(-1, 3)
    return body[:, 1].astype(np.int16), body[:, 2].astype(np.int16)


def export_spectrogram_csv(spec: Spectrogram, path: str | os.PathLike) -> None:
    """One row per time frame, one column per bin, dB to two decimals."""
    n_bins = spec.window_len // 2 + 1
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([f"bin_{k}" for k in range(n_bins)])
        for row in spec.magnitudes_db:
            w.writerow([f"{v:.2f}" for v in row])


def read_spectrogram_csv(path: str | os.PathLike) -> np.ndarray:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    n_bins = len(rows[0])
    return np.array(rows[1:], dtype=np.float64).reshape(-1, n_bins)
