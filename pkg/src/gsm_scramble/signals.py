"""Bundled and synthetic test signals."""

from __future__ import annotations

from importlib import resources

import numpy as np

from .speech_io import SAMPLE_RATE, PcmSignal, read_wav

# (centre Hz, bandwidth Hz) of the first three formants of /a/.
VOWEL_A_FORMANTS = ((730.0, 90.0), (1090.0, 110.0), (2440.0, 170.0))


def example_speech() -> PcmSignal:
    """Four seconds of read English speech (CMU ARCTIC a0007, resampled to 8 kHz)."""
    with resources.as_file(resources.files(__package__) / "data" / "arctic_a0007_8k.wav") as p:
        return read_wav(p)


def synthetic_vowel(
    duration_s: float = 1.0,
    f0_hz: float = 120.0,
    formants=VOWEL_A_FORMANTS,
    peak: int = 12000,
    vibrato_hz: float = 5.0,
    vibrato_depth: float = 0.03,
) -> PcmSignal:
    """Harmonic series shaped by a resonant formant envelope.

    Deterministic; a slow vibrato keeps the pitch from being perfectly
    periodic so the long-term predictor has some work to do.
    """
    n = int(round(duration_s * SAMPLE_RATE))
    t = np.arange(n) / SAMPLE_RATE
    inst_f0 = f0_hz * (1.0 + vibrato_depth * np.sin(2 * np.pi * vibrato_hz * t))
    phase = 2 * np.pi * np.cumsum(inst_f0) / SAMPLE_RATE
    x = np.zeros(n)
    for h in range(1, int(SAMPLE_RATE / 2 / f0_hz)):
        f = h * f0_hz
        gain = 1.0 / h
        for fc, bw in formants:
            gain *= 1.0 / abs(complex(1.0 - (f / fc) ** 2, f * bw / fc**2))
        x += gain * np.sin(h * phase)
    # Short fade in/out avoids a hard onset click.
    ramp = min(n // 2, 80)
    if ramp:
        env = np.ones(n)
        env[:ramp] = np.linspace(0, 1, ramp)
        env[-ramp:] = np.linspace(1, 0, ramp)
        x *= env
    x *= peak / max(np.abs(x).max(), 1e-12)
    return PcmSignal(np.round(x).astype(np.int16))


def sine(freq_hz: float, duration_s: float, amplitude: int = 32767, phase: float = 0.0) -> PcmSignal:
    n = int(round(duration_s * SAMPLE_RATE))
    t = np.arange(n) / SAMPLE_RATE
    x = np.round(amplitude * np.sin(2 * np.pi * freq_hz * t + phase))
    return PcmSignal(np.clip(x, -32768, 32767).astype(np.int16))
