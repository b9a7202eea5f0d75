import itertools
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gsm_scramble import des
from gsm_scramble.errors import BadVersion, LengthMismatch, NotAPermutation, TableError, Truncated
from gsm_scramble.scrambler import (
    PermutationTable,
    ScrambleConfig,
    descramble,
    deserialize_table,
    generate_table,
    identity_table,
    scramble,
    serialize_table,
)


@st.composite
def tables(draw, max_n=256):
    n = draw(st.integers(1, max_n))
    perm = draw(st.permutations(range(n)))
    flags = draw(st.lists(st.booleans(), min_size=n, max_size=n))
    return PermutationTable(tuple(perm), tuple(flags))


def cfg(n):
    return ScrambleConfig(160, n)


# -- table generation ---------------------------------------------------------

def test_generate_n1():
    t = generate_table(iter([0xFF]), 0, cfg(1))
    assert t.perm == (0,) and t.invert_flags == (True,)
    t = generate_table(iter([0xFE]), 0, cfg(1))
    assert t.invert_flags == (False,)


def test_generate_n2_forced_swap():
    t = generate_table(iter([0x00, 0x00]), 0, cfg(2))
    assert t.perm == (1, 0)


def test_generate_rejects_biased_bytes():
    # N=3, i=2: bytes >= 255 are redrawn; 255 then 4 -> j = 1.
    t = generate_table(iter([255, 4, 1, 0]), 0, cfg(3))
    # i=2 swaps with j=1 -> [0,2,1]; i=1 draws 1 -> j=1 (no-op).
    assert t.perm == (0, 2, 1)


def test_zero_key_regression_vector():
    # Hand-executed from the DES counter stream 8CA64DE9C1B123A7 166B40B44ABA4BD6 ...
    # (first 15 bytes drive the shuffle, no rejections; bytes 16-17 = 0xD6, 0x06 are the flags).
    t = generate_table(des.keystream(bytes(8), 0), 0, cfg(16))
    assert t.perm == (3, 10, 8, 13, 0, 4, 2, 6, 9, 5, 11, 14, 15, 7, 1, 12)
    assert t.invert_flags == tuple(bool(b) for b in (0, 1, 1, 0, 1, 0, 1, 1, 0, 1, 1, 0, 0, 0, 0, 0))


@settings(max_examples=60, deadline=None)
@given(st.binary(min_size=8, max_size=8), st.integers(1, 256), st.integers(0, 2**32 - 1))
def test_generated_tables_are_bijections(key, n, index):
    t = generate_table(des.keystream(key, index), index, cfg(n))
    assert sorted(t.perm) == list(range(n))
    assert len(t.invert_flags) == n


def test_rejection_sampling_uniform_n3():
    # Exhaustive over every byte input for the i=2 draw up to two tries (the
    # second try only after a rejected 255) and every byte for the i=1 draw.
    counts = Counter()
    first_draws = [(b,) for b in range(255)] + [(255, b) for b in range(255)]
    for prefix in first_draws:
        for c in range(256):
            t = generate_table(iter(prefix + (c, 0)), 0, cfg(3))
            counts[t.perm] += 1
    assert len(counts) == 6
    assert len(set(counts.values())) == 1


# -- scramble / descramble ----------------------------------------------------

def test_scramble_forced_example():
    a, b, c, d = 1, 2, 3, 4
    t = PermutationTable((1, 0), (True, False))
    assert scramble([a, b, c, d], t).tolist() == [d, c, a, b]
    assert descramble([d, c, a, b], t).tolist() == [a, b, c, d]


def test_identity_is_fixed_point(rng):
    x = rng.integers(-32768, 32768, 16 * 160).astype(np.int16)
    t = identity_table(16)
    assert np.array_equal(scramble(x, t), x)
    assert np.array_equal(descramble(x, t), x)


def test_length_mismatch():
    with pytest.raises(LengthMismatch):
        scramble(np.zeros(10), identity_table(3))


@settings(max_examples=200, deadline=None)
@given(tables(), st.integers(1, 8), st.sampled_from(["time", "sign"]), st.data())
def test_roundtrip_and_multiset(t, L, mode, data):
    x = np.array(data.draw(st.lists(st.integers(-32768, 32767), min_size=t.size * L, max_size=t.size * L)),
                 dtype=np.int16)
    y = scramble(x, t, mode)
    assert np.array_equal(descramble(y, t, mode), x)
    if mode == "time":
        assert sorted(y.tolist()) == sorted(x.tolist())


def _brute_force_inverse(y, t, L):
    # Try every rearrangement of y's sub-frames (N! orders x 2^N reversals)
    # and keep those that scramble back to y.
    n = t.size
    blocks = y.reshape(n, L)
    hits = []
    for order in itertools.permutations(range(n)):
        for flags in itertools.product((False, True), repeat=n):
            cand = np.concatenate([blocks[o][::-1] if f else blocks[o] for o, f in zip(order, flags)])
            if np.array_equal(scramble(cand, t), y):
                hits.append(cand)
    return hits


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_descramble_matches_brute_force(n, rng):
    L = 3
    x = rng.permutation(10_000)[: n * L].astype(np.int16)  # distinct samples -> unique preimage
    t = PermutationTable(tuple(rng.permutation(n)), tuple(rng.integers(0, 2, n).astype(bool)))
    y = scramble(x, t)
    hits = _brute_force_inverse(y, t, L)
    assert len(hits) == 1
    assert np.array_equal(hits[0], descramble(y, t))
    assert np.array_equal(hits[0], x)


# -- serialization ------------------------------------------------------------

def test_serialize_n1():
    assert serialize_table(PermutationTable((0,), (False,))) == bytes.fromhex("01000000")


def test_serialize_n16_length():
    t = generate_table(des.keystream(bytes(8), 0), 0, cfg(16))
    assert len(serialize_table(t, cfg(16))) == 20


def test_deserialize_example():
    t = deserialize_table(bytes.fromhex("0101010001"))
    assert t.perm == (1, 0) and t.invert_flags == (True, False)


@pytest.mark.parametrize(
    "raw, exc",
    [
        ("0101000000", NotAPermutation),
        ("0101020000", NotAPermutation),
        ("0201010001", BadVersion),
        ("01", Truncated),
        ("010101", Truncated),
        ("010101000100", TableError),
    ],
)
def test_deserialize_errors(raw, exc):
    with pytest.raises(exc):
        deserialize_table(bytes.fromhex(raw))


@settings(max_examples=200, deadline=None)
@given(tables())
def test_serialize_roundtrip(t):
    data = serialize_table(t)
    assert len(data) == 2 + t.size + (t.size + 7) // 8
    assert deserialize_table(data) == t


def test_config_validation():
    for bad in [dict(sub_frame_len=100), dict(sub_frame_len=0), dict(frames_per_super=0),
                dict(frames_per_super=257), dict(inversion_mode="freq")]:
        with pytest.raises(ValueError):
            ScrambleConfig(**bad)
    assert ScrambleConfig().frames_per_super == 16
