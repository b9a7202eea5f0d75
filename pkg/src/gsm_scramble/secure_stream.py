"""Scramble-then-encode pipeline and its ``GVS1`` container.

Wire layout (all integers big-endian)::

    header   "GVS1" | cipher_id u8 | sub_frame_len u16 | frames_per_super u16
             | superframe_count u32 | original_length u64
    record   iv[8] | table_ct_len u16 | table_ct | frames_per_super * (L/160) * 33 bytes

One record per super-frame.  The codec runs with one continuous state across
all frames of the stream, exactly as a handset vocoder would.
"""

from __future__ import annotations

import logging
import struct
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import des
from .codec import FRAME_BYTES, FRAME_LEN, DecoderState, EncoderState, decode_params, encode_samples, pack_frames
from .codec.frame import MAGIC, SILENCE_PARAMS, unpack_frames
from .errors import BadHeader, BadPadding, CipherError, DecryptionFailed, TableError, Truncated
from .scrambler import (
    PermutationTable,
    ScrambleConfig,
    deserialize_table,
    descramble,
    generate_table,
    scramble,
    serialize_table,
)
from .speech_io import PcmSignal, pad_to_superframe

log = logging.getLogger(__name__)

__all__ = [
    "MAGIC_BYTES",
    "CIPHER_DES_CBC",
    "StreamHeader",
    "SuperFrameRecord",
    "superframe_iv",
    "superframe_table",
    "encrypt_stream",
    "decrypt_stream",
    "eavesdrop_stream",
    "inject_bit_errors",
    "parse_stream",
]

MAGIC_BYTES = b"GVS1"
CIPHER_DES_CBC = 0x01
_HEADER = struct.Struct(">4sBHHIQ")

TableHook = Callable[[int], PermutationTable]


@dataclass(frozen=True)
class StreamHeader:
    cipher_id: int
    sub_frame_len: int
    frames_per_super: int
    superframe_count: int
    original_length: int

    SIZE = _HEADER.size

    def pack(self) -> bytes:
        return _HEADER.pack(
            MAGIC_BYTES, self.cipher_id, self.sub_frame_len, self.frames_per_super,
            self.superframe_count, self.original_length,
        )

    @classmethod
    def unpack(cls, data: bytes) -> "StreamHeader":
        if len(data) < _HEADER.size:
            raise BadHeader(f"stream shorter than the {_HEADER.size}-byte header")
        magic, cid, sub_len, n, count, orig = _HEADER.unpack_from(data)
        if magic != MAGIC_BYTES:
            raise BadHeader(f"bad magic {magic!r}")
        if sub_len == 0 or sub_len % FRAME_LEN or not 1 <= n <= 256:
            raise BadHeader(f"invalid geometry: sub_frame_len={sub_len}, frames_per_super={n}")
        if orig > count * sub_len * n:
            raise BadHeader("original_length exceeds the coded sample count")
        return cls(cid, sub_len, n, count, orig)

    @property
    def frames_per_record(self) -> int:
        return self.frames_per_super * (self.sub_frame_len // FRAME_LEN)


@dataclass(frozen=True)
class SuperFrameRecord:
    iv: bytes
    table_ciphertext: bytes
    codec_frames: bytes
    # Byte offset of codec_frames inside the stream.
    frames_offset: int = 0

    def pack(self) -> bytes:
        return self.iv + struct.pack(">H", len(self.table_ciphertext)) + self.table_ciphertext + self.codec_frames


def superframe_iv(key: bytes, index: int) -> bytes:
    return des.encrypt_block(key, index.to_bytes(8, "big"))


def superframe_table(key: bytes, index: int, config: ScrambleConfig) -> PermutationTable:
    return generate_table(des.keystream(key, index), index, config)


def _tables(key, count, config, table_hook):
    if table_hook is not None:
        return [table_hook(s) for s in range(count)]
    return [superframe_table(key, s, config) for s in range(count)]


def encrypt_stream(
    signal: PcmSignal,
    key: bytes,
    config: ScrambleConfig = ScrambleConfig(),
    table_hook: TableHook | None = None,
) -> bytes:
    """Scramble, encode and multiplex encrypted index tables.

    ``table_hook`` replaces the keyed table generator (testing only).
    """
    padded, original_length = pad_to_superframe(signal, config.sub_frame_len, config.frames_per_super)
    count = len(padded) // config.superframe_len
    tables = _tables(key, count, config, table_hook)

    x = padded.samples
    scrambled = np.empty(len(x), dtype=np.int64)
    for s, table in enumerate(tables):
        sl = slice(s * config.superframe_len, (s + 1) * config.superframe_len)
        scrambled[sl] = scramble(x[sl], table, config.inversion_mode)
    frames = pack_frames(encode_samples(scrambled, EncoderState())) if count else b""

    header = StreamHeader(CIPHER_DES_CBC, config.sub_frame_len, config.frames_per_super, count, original_length)
    out = bytearray(header.pack())
    per_record = header.frames_per_record * FRAME_BYTES
    for s, table in enumerate(tables):
        iv = superframe_iv(key, s)
        ct = des.cbc_encrypt(key, iv, serialize_table(table, config))
        out += SuperFrameRecord(iv, ct, frames[s * per_record : (s + 1) * per_record]).pack()
    return bytes(out)


def parse_stream(stream: bytes) -> tuple[StreamHeader, list[SuperFrameRecord]]:
    header = StreamHeader.unpack(stream)
    if header.cipher_id != CIPHER_DES_CBC:
        raise BadHeader(f"unsupported cipher id 0x{header.cipher_id:02x}")
    per_record = header.frames_per_record * FRAME_BYTES
    pos = StreamHeader.SIZE
    records = []
    for s in range(header.superframe_count):
        if pos + 10 > len(stream):
            raise Truncated(f"record {s} header cut short")
        iv = stream[pos : pos + 8]
        (ct_len,) = struct.unpack_from(">H", stream, pos + 8)
        if ct_len == 0 or ct_len % 8:
            raise BadHeader(f"record {s}: table ciphertext length {ct_len} is not a positive multiple of 8")
        ct_start = pos + 10
        fr_start = ct_start + ct_len
        end = fr_start + per_record
        if end > len(stream):
            raise Truncated(f"record {s} cut short")
        records.append(SuperFrameRecord(iv, stream[ct_start:fr_start], stream[fr_start:end], fr_start))
        pos = end
    if pos != len(stream):
        raise BadHeader(f"{len(stream) - pos} trailing bytes after the last record")
    return header, records


def _decode_records(records: list[SuperFrameRecord]) -> np.ndarray:
    data = b"".join(r.codec_frames for r in records)
    if not data:
        return np.zeros(0, dtype=np.int16)
    raw = np.frombuffer(data, dtype=np.uint8).reshape(-1, FRAME_BYTES).copy()
    bad = (raw[:, 0] >> 4) != MAGIC
    if bad.any():
        log.warning("substituting silence for %d frames with a bad magic nibble", int(bad.sum()))
        raw[bad] = np.frombuffer(pack_frames(SILENCE_PARAMS), dtype=np.uint8)
    return decode_params(unpack_frames(raw.tobytes()), DecoderState())


def decrypt_table(key: bytes, record: SuperFrameRecord, index: int, header: StreamHeader) -> PermutationTable:
    try:
        plain = des.cbc_decrypt(key, record.iv, record.table_ciphertext)
        table = deserialize_table(plain, index)
    except (BadPadding, CipherError, TableError, Truncated) as exc:
        raise DecryptionFailed(f"super-frame {index}: {exc}") from exc
    if table.size != header.frames_per_super:
        raise DecryptionFailed(f"super-frame {index}: table size {table.size} != {header.frames_per_super}")
    return table


def decrypt_stream(stream: bytes, key: bytes, inversion_mode: str = "time") -> PcmSignal:
    """Receiver side: decode, decrypt each table, descramble, truncate."""
    header, records = parse_stream(stream)
    tables = [decrypt_table(key, r, s, header) for s, r in enumerate(records)]
    decoded = _decode_records(records)
    unit = header.sub_frame_len * header.frames_per_super
    out = np.empty_like(decoded)
    for s, table in enumerate(tables):
        sl = slice(s * unit, (s + 1) * unit)
        out[sl] = descramble(decoded[sl], table, inversion_mode)
    return PcmSignal(out[: header.original_length])


def eavesdrop_stream(stream: bytes) -> PcmSignal:
    """What a receiver with the codec but without the key hears (not truncated)."""
    _, records = parse_stream(stream)
    return PcmSignal(_decode_records(records))


def inject_bit_errors(stream: bytes, bit_error_rate: float, seed: int = 0) -> bytes:
    """Flip codec payload bits independently with probability ``bit_error_rate``.

    Header, IVs, table ciphertexts and the frame magic nibbles are left alone.
    """
    if not 0.0 <= bit_error_rate <= 1.0:
        raise ValueError("bit_error_rate must be in [0, 1]")
    _, records = parse_stream(stream)
    if bit_error_rate == 0.0 or not records:
        return bytes(stream)
    rng = np.random.default_rng(seed)
    out = bytearray(stream)
    for r in records:
        raw = np.frombuffer(r.codec_frames, dtype=np.uint8).reshape(-1, FRAME_BYTES)
        bits = np.unpackbits(raw, axis=1)
        flips = rng.random((len(raw), FRAME_BYTES * 8 - 4)) < bit_error_rate
        bits[:, 4:] ^= flips.astype(np.uint8)
        out[r.frames_offset : r.frames_offset + len(r.codec_frames)] = np.packbits(bits, axis=1).tobytes()
    return bytes(out)


def scrambled_signal(signal: PcmSignal, key: bytes, config: ScrambleConfig = ScrambleConfig()) -> PcmSignal:
    """The padded, scrambled signal handed to the vocoder (never on the wire)."""
    padded, _ = pad_to_superframe(signal, config.sub_frame_len, config.frames_per_super)
    count = len(padded) // config.superframe_len
    x = padded.samples
    parts = [
        scramble(x[s * config.superframe_len : (s + 1) * config.superframe_len],
                 superframe_table(key, s, config), config.inversion_mode)
        for s in range(count)
    ]
    return PcmSignal(np.concatenate(parts) if parts else np.zeros(0, dtype=np.int16))
