"""DES block cipher, CBC mode with PKCS#7 padding, and a counter keystream.

Bit numbering follows FIPS 46-3: bit 1 is the most significant bit of the
first byte.  Permutations are applied through precomputed lookup tables so a
block costs a few hundred integer operations.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterator

from .errors import BadLength, BadPadding

__all__ = [
    "BLOCK_SIZE",
    "WEAK_KEYS",
    "key_schedule",
    "encrypt_block",
    "decrypt_block",
    "cbc_encrypt",
    "cbc_decrypt",
    "keystream",
    "parse_key",
]

BLOCK_SIZE = 8

# fmt: off
IP = (
    58, 50, 42, 34, 26, 18, 10, 2,
    60, 52, 44, 36, 28, 20, 12, 4,
    62, 54, 46, 38, 30, 22, 14, 6,
    64, 56, 48, 40, 32, 24, 16, 8,
    57, 49, 41, 33, 25, 17, 9, 1,
    59, 51, 43, 35, 27, 19, 11, 3,
    61, 53, 45, 37, 29, 21, 13, 5,
    63, 55, 47, 39, 31, 23, 15, 7,
)

P = (
    16, 7, 20, 21, 29, 12, 28, 17,
    1, 15, 23, 26, 5, 18, 31, 10,
    2, 8, 24, 14, 32, 27, 3, 9,
    19, 13, 30, 6, 22, 11, 4, 25,
)

PC1 = (
    57, 49, 41, 33, 25, 17, 9,
    1, 58, 50, 42, 34, 26, 18,
    10, 2, 59, 51, 43, 35, 27,
    19, 11, 3, 60, 52, 44, 36,
    63, 55, 47, 39, 31, 23, 15,
    7, 62, 54, 46, 38, 30, 22,
    14, 6, 61, 53, 45, 37, 29,
    21, 13, 5, 28, 20, 12, 4,
)

PC2 = (
    14, 17, 11, 24, 1, 5,
    3, 28, 15, 6, 21, 10,
    23, 19, 12, 4, 26, 8,
    16, 7, 27, 20, 13, 2,
    41, 52, 31, 37, 47, 55,
    30, 40, 51, 45, 33, 48,
    44, 49, 39, 56, 34, 53,
    46, 42, 50, 36, 29, 32,
)

ROTATIONS = (1, 1, 2, 2, 2, 2, 2, 2, 1, 2, 2, 2, 2, 2, 2, 1)

SBOXES = (
    (14, 4, 13, 1, 2, 15, 11, 8, 3, 10, 6, 12, 5, 9, 0, 7,
     0, 15, 7, 4, 14, 2, 13, 1, 10, 6, 12, 11, 9, 5, 3, 8,
     4, 1, 14, 8, 13, 6, 2, 11, 15, 12, 9, 7, 3, 10, 5, 0,
     15, 12, 8, 2, 4, 9, 1, 7, 5, 11, 3, 14, 10, 0, 6, 13),
    (15, 1, 8, 14, 6, 11, 3, 4, 9, 7, 2, 13, 12, 0, 5, 10,
     3, 13, 4, 7, 15, 2, 8, 14, 12, 0, 1, 10, 6, 9, 11, 5,
     0, 14, 7, 11, 10, 4, 13, 1, 5, 8, 12, 6, 9, 3, 2, 15,
     13, 8, 10, 1, 3, 15, 4, 2, 11, 6, 7, 12, 0, 5, 14, 9),
    (10, 0, 9, 14, 6, 3, 15, 5, 1, 13, 12, 7, 11, 4, 2, 8,
     13, 7, 0, 9, 3, 4, 6, 10, 2, 8, 5, 14, 12, 11, 15, 1,
     13, 6, 4, 9, 8, 15, 3, 0, 11, 1, 2, 12, 5, 10, 14, 7,
     1, 10, 13, 0, 6, 9, 8, 7, 4, 15, 14, 3, 11, 5, 2, 12),
    (7, 13, 14, 3, 0, 6, 9, 10, 1, 2, 8, 5, 11, 12, 4, 15,
     13, 8, 11, 5, 6, 15, 0, 3, 4, 7, 2, 12, 1, 10, 14, 9,
     10, 6, 9, 0, 12, 11, 7, 13, 15, 1, 3, 14, 5, 2, 8, 4,
     3, 15, 0, 6, 10, 1, 13, 8, 9, 4, 5, 11, 12, 7, 2, 14),
    (2, 12, 4, 1, 7, 10, 11, 6, 8, 5, 3, 15, 13, 0, 14, 9,
     14, 11, 2, 12, 4, 7, 13, 1, 5, 0, 15, 10, 3, 9, 8, 6,
     4, 2, 1, 11, 10, 13, 7, 8, 15, 9, 12, 5, 6, 3, 0, 14,
     11, 8, 12, 7, 1, 14, 2, 13, 6, 15, 0, 9, 10, 4, 5, 3),
    (12, 1, 10, 15, 9, 2, 6, 8, 0, 13, 3, 4, 14, 7, 5, 11,
     10, 15, 4, 2, 7, 12, 9, 5, 6, 1, 13, 14, 0, 11, 3, 8,
     9, 14, 15, 5, 2, 8, 12, 3, 7, 0, 4, 10, 1, 13, 11, 6,
     4, 3, 2, 12, 9, 5, 15, 10, 11, 14, 1, 7, 6, 0, 8, 13),
    (4, 11, 2, 14, 15, 0, 8, 13, 3, 12, 9, 7, 5, 10, 6, 1,
     13, 0, 11, 7, 4, 9, 1, 10, 14, 3, 5, 12, 2, 15, 8, 6,
     1, 4, 11, 13, 12, 3, 7, 14, 10, 15, 6, 8, 0, 5, 9, 2,
     6, 11, 13, 8, 1, 4, 10, 7, 9, 5, 0, 15, 14, 2, 3, 12),
    (13, 2, 8, 4, 6, 15, 11, 1, 10, 9, 3, 14, 5, 0, 12, 7,
     1, 15, 13, 8, 10, 3, 7, 4, 12, 5, 6, 11, 0, 14, 9, 2,
     7, 11, 4, 1, 9, 12, 14, 2, 0, 6, 10, 13, 15, 3, 5, 8,
     2, 1, 14, 7, 4, 10, 8, 13, 15, 12, 9, 0, 3, 5, 6, 11),
)
# fmt: on

WEAK_KEYS = tuple(
    bytes.fromhex(h)
    for h in ("0101010101010101", "FEFEFEFEFEFEFEFE", "E0E0E0E0F1F1F1F1", "1F1F1F1F0E0E0E0E")
)

_MASK28 = (1 << 28) - 1


def _permute(value: int, table: tuple[int, ...], in_bits: int) -> int:
    out = 0
    for pos in table:
        out = (out << 1) | ((value >> (in_bits - pos)) & 1)
    return out


def _byte_tables(table: tuple[int, ...]) -> list[list[int]]:
    # One 256-entry table per input byte; the permutation of a 64-bit word is
    # the OR of the eight per-byte contributions.
    return [
        [_permute(v << (56 - 8 * b), table, 64) for v in range(256)]
        for b in range(8)
    ]


_FP = tuple(IP.index(i) + 1 for i in range(1, 65))
_IP_TABLES = _byte_tables(IP)
_FP_TABLES = _byte_tables(_FP)


def _sp_tables() -> list[list[int]]:
    # S-box i followed by P, as a function of the 6-bit S-box input.
    tables = []
    for i, box in enumerate(SBOXES):
        t = []
        for x in range(64):
            row = ((x >> 4) & 2) | (x & 1)
            col = (x >> 1) & 0xF
            s_out = box[16 * row + col] << (28 - 4 * i)
            t.append(_permute(s_out, P, 32))
        tables.append(t)
    return tables


_SP = _sp_tables()


def _ip(block: int) -> int:
    t = _IP_TABLES
    return (
        t[0][block >> 56] | t[1][(block >> 48) & 0xFF] | t[2][(block >> 40) & 0xFF]
        | t[3][(block >> 32) & 0xFF] | t[4][(block >> 24) & 0xFF]
        | t[5][(block >> 16) & 0xFF] | t[6][(block >> 8) & 0xFF] | t[7][block & 0xFF]
    )


def _fp(block: int) -> int:
    t = _FP_TABLES
    return (
        t[0][block >> 56] | t[1][(block >> 48) & 0xFF] | t[2][(block >> 40) & 0xFF]
        | t[3][(block >> 32) & 0xFF] | t[4][(block >> 24) & 0xFF]
        | t[5][(block >> 16) & 0xFF] | t[6][(block >> 8) & 0xFF] | t[7][block & 0xFF]
    )


def _check_key(key: bytes) -> bytes:
    key = bytes(key)
    if len(key) != 8:
        raise BadLength(f"DES key must be 8 bytes, got {len(key)}")
    return key


def key_schedule(key: bytes) -> tuple[int, ...]:
    """Return the sixteen 48-bit round keys for ``key``.

    Parity bits are dropped by PC-1 and never checked.
    """
    return _key_schedule(_check_key(key))


@lru_cache(maxsize=1024)
def _key_schedule(key: bytes) -> tuple[int, ...]:
    cd = _permute(int.from_bytes(key, "big"), PC1, 64)
    c, d = cd >> 28, cd & _MASK28
    keys = []
    for shift in ROTATIONS:
        c = ((c << shift) | (c >> (28 - shift))) & _MASK28
        d = ((d << shift) | (d >> (28 - shift))) & _MASK28
        keys.append(_permute((c << 28) | d, PC2, 56))
    return tuple(keys)


@lru_cache(maxsize=1024)
def _chunked_schedule(key: bytes) -> tuple[tuple[int, ...], ...]:
    return tuple(
        tuple((k >> (42 - 6 * j)) & 0x3F for j in range(8)) for k in _key_schedule(key)
    )


def _crypt(block: int, subkeys) -> int:
    s0, s1, s2, s3, s4, s5, s6, s7 = _SP
    x = _ip(block)
    left, right = x >> 32, x & 0xFFFFFFFF
    for k in subkeys:
        # 34-bit window [32, 1, 2, ..., 32, 1] so each E-box chunk is a plain shift.
        e = ((right & 1) << 33) | (right << 1) | (right >> 31)
        f = (
            s0[((e >> 28) & 0x3F) ^ k[0]] | s1[((e >> 24) & 0x3F) ^ k[1]]
            | s2[((e >> 20) & 0x3F) ^ k[2]] | s3[((e >> 16) & 0x3F) ^ k[3]]
            | s4[((e >> 12) & 0x3F) ^ k[4]] | s5[((e >> 8) & 0x3F) ^ k[5]]
            | s6[((e >> 4) & 0x3F) ^ k[6]] | s7[(e & 0x3F) ^ k[7]]
        )
        left, right = right, left ^ f
    return _fp((right << 32) | left)


def _encrypt_int(key: bytes, block: int) -> int:
    return _crypt(block, _chunked_schedule(key))


def _decrypt_int(key: bytes, block: int) -> int:
    return _crypt(block, _chunked_schedule(key)[::-1])


def _check_block(block: bytes) -> int:
    if len(block) != BLOCK_SIZE:
        raise BadLength(f"DES block must be 8 bytes, got {len(block)}")
    return int.from_bytes(block, "big")


def encrypt_block(key: bytes, block: bytes) -> bytes:
    return _encrypt_int(_check_key(key), _check_block(block)).to_bytes(8, "big")


def decrypt_block(key: bytes, block: bytes) -> bytes:
    return _decrypt_int(_check_key(key), _check_block(block)).to_bytes(8, "big")


def pkcs7_pad(data: bytes) -> bytes:
    n = BLOCK_SIZE - len(data) % BLOCK_SIZE
    return bytes(data) + bytes([n]) * n


def pkcs7_unpad(data: bytes) -> bytes:
    if not data or len(data) % BLOCK_SIZE:
        raise BadPadding("padded data is not block aligned")
    n = data[-1]
    if not 1 <= n <= BLOCK_SIZE or data[-n:] != bytes([n]) * n:
        raise BadPadding("invalid PKCS#7 padding")
    return data[:-n]


def cbc_encrypt(key: bytes, iv: bytes, plaintext: bytes) -> bytes:
    """PKCS#7-pad ``plaintext`` and encrypt it in CBC mode."""
    key = _check_key(key)
    subkeys = _chunked_schedule(key)
    prev = _check_block(iv)
    data = pkcs7_pad(plaintext)
    out = bytearray()
    for i in range(0, len(data), BLOCK_SIZE):
        prev = _crypt(int.from_bytes(data[i : i + BLOCK_SIZE], "big") ^ prev, subkeys)
        out += prev.to_bytes(8, "big")
    return bytes(out)


def cbc_decrypt(key: bytes, iv: bytes, ciphertext: bytes) -> bytes:
    """Decrypt CBC ``ciphertext`` and strip its PKCS#7 padding.

    Raises
    ------
    BadLength
        If the ciphertext is empty or not a multiple of 8 bytes.
    BadPadding
        If the recovered padding is malformed (wrong key or tampering).
    """
    key = _check_key(key)
    if not ciphertext or len(ciphertext) % BLOCK_SIZE:
        raise BadLength(f"ciphertext length {len(ciphertext)} is not a positive multiple of 8")
    subkeys = _chunked_schedule(key)[::-1]
    prev = _check_block(iv)
    out = bytearray()
    for i in range(0, len(ciphertext), BLOCK_SIZE):
        c = int.from_bytes(ciphertext[i : i + BLOCK_SIZE], "big")
        out += (_crypt(c, subkeys) ^ prev).to_bytes(8, "big")
        prev = c
    return pkcs7_unpad(bytes(out))


def keystream(key: bytes, superframe_index: int) -> Iterator[int]:
    """Unbounded byte stream: DES in counter mode over ``index * 2**32 + j``."""
    key = _check_key(key)
    if not 0 <= superframe_index < 1 << 32:
        raise ValueError("superframe_index must be in [0, 2**32)")
    subkeys = _chunked_schedule(key)
    base = superframe_index << 32
    j = 0
    while True:
        yield from _crypt(base + j, subkeys).to_bytes(8, "big")
        j += 1


def parse_key(data: bytes, hex_text: bool = False) -> bytes:
    """Decode a key file body: 8 raw bytes, or 16 hex characters when ``hex_text``."""
    if hex_text:
        text = data.decode("ascii").strip()
        if len(text) != 16:
            raise BadLength("hex key must be exactly 16 hex characters")
        return bytes.fromhex(text)
    return _check_key(data)
