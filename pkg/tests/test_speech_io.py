import struct

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from gsm_scramble.errors import NotWav, UnsupportedFormat
from gsm_scramble.speech_io import PcmSignal, pad_to_superframe, read_wav, write_wav


def _wav_bytes(samples, rate=8000, channels=1, bits=16, codec=1):
    pcm = np.asarray(samples, dtype="<i2").tobytes()
    block = channels * bits // 8
    return struct.pack(
        "<4sI4s4sIHHIIHH4sI", b"RIFF", 36 + len(pcm), b"WAVE", b"fmt ", 16, codec, channels,
        rate, rate * block, block, bits, b"data", len(pcm),
    ) + pcm


def test_read_three_samples(tmp_path):
    p = tmp_path / "a.wav"
    p.write_bytes(_wav_bytes([0, 100, -100]))
    assert read_wav(p).samples.tolist() == [0, 100, -100]


def test_read_skips_unknown_chunks(tmp_path):
    raw = _wav_bytes([1, 2, 3])
    extra = b"LIST" + struct.pack("<I", 3) + b"abc\x00"
    p = tmp_path / "b.wav"
    p.write_bytes(raw[:12] + extra + raw[12:])
    assert read_wav(p).samples.tolist() == [1, 2, 3]


@pytest.mark.parametrize(
    "kwargs",
    [dict(rate=44100, channels=2), dict(rate=16000), dict(bits=8), dict(codec=3), dict(channels=2)],
)
def test_unsupported_formats(tmp_path, kwargs):
    p = tmp_path / "c.wav"
    p.write_bytes(_wav_bytes([0, 0, 0, 0], **kwargs))
    with pytest.raises(UnsupportedFormat):
        read_wav(p)


def test_not_wav(tmp_path):
    p = tmp_path / "d.wav"
    p.write_bytes(b"not a wave file at all")
    with pytest.raises(NotWav):
        read_wav(p)
    p.write_bytes(_wav_bytes([1])[:36])  # no data chunk
    with pytest.raises(NotWav):
        read_wav(p)


def test_missing_file_is_io_error(tmp_path):
    with pytest.raises(OSError):
        read_wav(tmp_path / "nope.wav")


def test_write_empty(tmp_path):
    p = tmp_path / "e.wav"
    write_wav(PcmSignal(np.zeros(0, dtype=np.int16)), p)
    data = p.read_bytes()
    assert len(data) == 44
    assert data[40:44] == b"\x00\x00\x00\x00"
    assert len(read_wav(p)) == 0


def test_write_header_arithmetic(tmp_path):
    p = tmp_path / "f.wav"
    write_wav(PcmSignal(np.arange(8000) % 300), p)
    data = p.read_bytes()
    assert len(data) == 44 + 16000
    assert data[:4] == b"RIFF" and data[8:16] == b"WAVEfmt " and data[36:40] == b"data"
    assert struct.unpack_from("<I", data, 16)[0] == 16


@settings(max_examples=50, deadline=None)
@given(arrays(np.int16, st.integers(0, 2000)))
def test_roundtrip_identity(tmp_path_factory, x):
    p = tmp_path_factory.mktemp("rt") / "x.wav"
    sig = PcmSignal(x)
    write_wav(sig, p)
    assert read_wav(p) == sig


def test_signal_invariants():
    with pytest.raises(UnsupportedFormat):
        PcmSignal(np.zeros(4, dtype=np.int16), 16000)
    with pytest.raises(ValueError):
        PcmSignal(np.array([40000]))


@pytest.mark.parametrize(
    "n, expected",
    [(2560, 2560), (2561, 5120), (0, 0), (1, 2560)],
)
def test_pad_to_superframe(n, expected):
    sig = PcmSignal(np.arange(n) % 1000)
    padded, orig = pad_to_superframe(sig, 160, 16)
    assert orig == n
    assert len(padded) == expected


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 5000), st.sampled_from([160, 320, 960]), st.integers(1, 20))
def test_pad_properties(n, L, N):
    sig = PcmSignal((np.arange(n) * 7 % 2001) - 1000)
    padded, orig = pad_to_superframe(sig, L, N)
    assert len(padded) % (L * N) == 0
    assert orig == n
    assert np.array_equal(padded.samples[:n], sig.samples)
    assert not padded.samples[n:].any()
