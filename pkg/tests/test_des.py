import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gsm_scramble import des
from gsm_scramble.errors import BadLength, BadPadding

try:
    from cryptography.hazmat.decrepit.ciphers.algorithms import TripleDES
except ImportError:  # older cryptography
    try:
        from cryptography.hazmat.primitives.ciphers.algorithms import TripleDES
    except ImportError:
        TripleDES = None


def _oracle_encrypt(key, block):
    from cryptography.hazmat.primitives.ciphers import Cipher, modes

    enc = Cipher(TripleDES(key * 3), modes.ECB()).encryptor()
    return enc.update(block) + enc.finalize()


def _flip(b: bytes) -> bytes:
    return bytes(x ^ 0xFF for x in b)


@pytest.mark.parametrize(
    "key, pt, ct",
    [
        ("0000000000000000", "0000000000000000", "8CA64DE9C1B123A7"),
        ("10316E028C8F3B4A", "0000000000000000", "82DCBAFBDEAB6602"),
        ("0101010101010101", "8000000000000000", "95F8A5E5DD31D900"),
        ("133457799BBCDFF1", "0123456789ABCDEF", "85E813540F0AB405"),
    ],
)
def test_known_answers(key, pt, ct):
    k, p, c = bytes.fromhex(key), bytes.fromhex(pt), bytes.fromhex(ct)
    assert des.encrypt_block(k, p) == c
    assert des.decrypt_block(k, c) == p


@pytest.mark.skipif(TripleDES is None, reason="cryptography not installed")
def test_matches_reference_implementation(rng):
    for _ in range(200):
        k, b = rng.bytes(8), rng.bytes(8)
        assert des.encrypt_block(k, b) == _oracle_encrypt(k, b)


def test_round_keys_zero_and_complement():
    assert des.key_schedule(bytes(8)) == (0,) * 16
    k = bytes.fromhex("133457799BBCDFF1")
    mask = (1 << 48) - 1
    assert des.key_schedule(_flip(k)) == tuple(r ^ mask for r in des.key_schedule(k))


@settings(max_examples=100, deadline=None)
@given(st.binary(min_size=8, max_size=8), st.binary(min_size=8, max_size=8))
def test_complementation_property(k, p):
    assert des.encrypt_block(_flip(k), _flip(p)) == _flip(des.encrypt_block(k, p))


@pytest.mark.parametrize("k", des.WEAK_KEYS)
def test_weak_keys_are_involutions(k, rng):
    for _ in range(10):
        p = rng.bytes(8)
        assert des.encrypt_block(k, des.encrypt_block(k, p)) == p


def test_parity_bits_ignored():
    k = bytes.fromhex("133457799BBCDFF1")
    k2 = bytes(b ^ 1 for b in k)
    p = bytes(range(8))
    assert des.encrypt_block(k, p) == des.encrypt_block(k2, p)


def test_bad_lengths():
    with pytest.raises(BadLength):
        des.encrypt_block(bytes(7), bytes(8))
    with pytest.raises(BadLength):
        des.encrypt_block(bytes(8), bytes(9))


def test_cbc_lengths():
    k, iv = bytes(8), bytes(8)
    assert len(des.cbc_encrypt(k, iv, b"")) == 8
    assert len(des.cbc_encrypt(k, iv, bytes(20))) == 24
    assert len(des.cbc_encrypt(k, iv, bytes(16))) == 24


def test_cbc_roundtrip_all_lengths(rng):
    k, iv = rng.bytes(8), rng.bytes(8)
    for n in range(257):
        m = rng.bytes(n)
        assert des.cbc_decrypt(k, iv, des.cbc_encrypt(k, iv, m)) == m


@pytest.mark.skipif(TripleDES is None, reason="cryptography not installed")
def test_cbc_matches_reference():
    from cryptography.hazmat.primitives.ciphers import Cipher, modes

    k, iv, m = bytes.fromhex("133457799BBCDFF1"), bytes(range(8)), b"sixteen byte msg!!"
    enc = Cipher(TripleDES(k * 3), modes.CBC(iv)).encryptor()
    padded = des.pkcs7_pad(m)
    assert des.cbc_encrypt(k, iv, m) == enc.update(padded) + enc.finalize()


def test_cbc_errors():
    k, iv = bytes(8), bytes(8)
    with pytest.raises(BadLength):
        des.cbc_decrypt(k, iv, b"")
    with pytest.raises(BadLength):
        des.cbc_decrypt(k, iv, bytes(12))
    ct = bytearray(des.cbc_encrypt(k, iv, b"abc"))
    ct[-1] ^= 0x55
    with pytest.raises(BadPadding):
        des.cbc_decrypt(k, iv, bytes(ct))


def test_pkcs7():
    assert des.pkcs7_pad(b"") == bytes([8]) * 8
    assert des.pkcs7_pad(b"abcdefg") == b"abcdefg\x01"
    for bad in [b"", bytes(7), bytes(8), b"abcdefg\x09", b"abcdef\x01\x02"]:
        with pytest.raises(BadPadding):
            des.pkcs7_unpad(bad)


def test_keystream():
    import itertools

    first = bytes(itertools.islice(des.keystream(bytes(8), 0), 8))
    assert first.hex().upper() == "8CA64DE9C1B123A7"
    k = bytes.fromhex("133457799BBCDFF1")
    a = bytes(itertools.islice(des.keystream(k, 3), 64))
    assert a == bytes(itertools.islice(des.keystream(k, 3), 64))
    # Counter blocks of different super-frames never coincide.
    b = bytes(itertools.islice(des.keystream(k, 4), 64))
    blocks_a = {a[i : i + 8] for i in range(0, 64, 8)}
    blocks_b = {b[i : i + 8] for i in range(0, 64, 8)}
    assert not blocks_a & blocks_b
    # Block j of super-frame s is E_K(s * 2^32 + j).
    assert a[8:16] == des.encrypt_block(k, ((3 << 32) + 1).to_bytes(8, "big"))
    with pytest.raises(ValueError):
        next(des.keystream(k, 1 << 32))


def test_parse_key():
    assert des.parse_key(b"133457799BBCDFF1\n", hex_text=True) == bytes.fromhex("133457799BBCDFF1")
    assert des.parse_key(bytes(8)) == bytes(8)
    with pytest.raises(BadLength):
        des.parse_key(b"1234", hex_text=True)
    with pytest.raises(BadLength):
        des.parse_key(bytes(9))
