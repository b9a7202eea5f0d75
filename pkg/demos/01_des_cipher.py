"""DES block cipher, CBC and the per-super-frame counter keystream.

Run:  python demos/01_des_cipher.py
"""

import itertools

from gsm_scramble import des

key = bytes.fromhex("133457799BBCDFF1")
block = bytes.fromhex("0123456789ABCDEF")

ct = des.encrypt_block(key, block)
print("plaintext ", block.hex().upper())
print("ciphertext", ct.hex().upper())
print("decrypted ", des.decrypt_block(key, ct).hex().upper())

# Complementing key and plaintext complements the ciphertext.
flip = lambda b: bytes(x ^ 0xFF for x in b)  # noqa: E731
print("complementation holds:", des.encrypt_block(flip(key), flip(block)) == flip(ct))

# Weak keys make encryption its own inverse.
weak = des.WEAK_KEYS[1]
print("weak key involution:", des.encrypt_block(weak, des.encrypt_block(weak, block)) == block)

# CBC with PKCS#7 padding, as used for the permutation tables.
iv = bytes(8)
msg = b"twenty byte message!"
c = des.cbc_encrypt(key, iv, msg)
print(f"CBC: {len(msg)} bytes -> {len(c)} bytes, round trip ok: {des.cbc_decrypt(key, iv, c) == msg}")

# The keystream that drives table generation for super-frames 0 and 1.
for s in (0, 1):
    print(f"keystream s={s}:", bytes(itertools.islice(des.keystream(key, s), 16)).hex().upper())
