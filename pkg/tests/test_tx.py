"""Transaction signing, hashing, and wire-format tamper resistance."""

import random

import pytest

from pchain.codec import ByteReader
from pchain.errors import ChainError, CodecError
from pchain.keys import generate_keypair
from pchain.tx import (
    RegisterSeller,
    SignedTransaction,
    Transfer,
    decode_transaction,
    sign_transaction,
    verify_transaction,
)

import oracles

KEY = generate_keypair(b"\x11" * 32)
OTHER = generate_keypair(b"\x22" * 32)


def _tx(nonce=0, value=10):
    return SignedTransaction(
        sender=KEY.address, nonce=nonce, action=RegisterSeller(company=b"\xaa" * 20), value_wei=value
    )


def test_sign_then_verify():
    signed = sign_transaction(_tx(), KEY)
    assert verify_transaction(signed)
    assert signed.public_key == KEY.public_key
    # signature also checks out under the independent implementation
    assert oracles.ed25519_verify(signed.public_key, signed.signing_bytes(), signed.signature)


def test_tx_hash_excludes_signature():
    unsigned = _tx()
    signed = sign_transaction(unsigned, KEY)
    assert unsigned.tx_hash == signed.tx_hash


def test_sender_key_mismatch_guard():
    tx = SignedTransaction(
        sender=OTHER.address, nonce=0, action=RegisterSeller(company=b"\xaa" * 20), value_wei=0
    )
    with pytest.raises(ChainError) as err:
        sign_transaction(tx, KEY)
    assert err.value.code == "SenderKeyMismatch"


def test_unsigned_transaction_fails_verification():
    assert not verify_transaction(_tx())


def test_wrong_key_for_sender_fails_verification():
    from dataclasses import replace

    signed = sign_transaction(_tx(), KEY)
    wrong_signer = replace(
        signed, public_key=OTHER.public_key, signature=OTHER.sign(signed.signing_bytes())
    )
    # the signature itself is valid, but its key does not derive the sender address
    assert not verify_transaction(wrong_signer)


def test_wire_bytes_requires_signature():
    with pytest.raises(ChainError) as err:
        _tx().wire_bytes()
    assert err.value.code == "Unsigned"


def test_single_byte_mutations_never_verify():
    """Fuzz: any single-byte change to the wire form is rejected somewhere."""
    signed = sign_transaction(_tx(nonce=3, value=999), KEY)
    wire = signed.wire_bytes()
    rng = random.Random(42)
    for _ in range(100):
        pos = rng.randrange(len(wire))
        flip = rng.randrange(1, 256)
        mutated = bytearray(wire)
        mutated[pos] ^= flip
        try:
            reader = ByteReader(bytes(mutated))
            decoded = decode_transaction(reader)
            reader.expect_end()
        except (CodecError, ChainError):
            continue  # malformed wire bytes rejected at decode
        assert not verify_transaction(decoded), f"mutation at byte {pos} still verified"


def test_exhaustive_preimage_byte_flips_fail_verification():
    """Every byte of the signed preimage is covered by the signature."""
    signed = sign_transaction(_tx(), KEY)
    preimage = signed.signing_bytes()
    from dataclasses import replace

    for pos in range(len(preimage)):
        mutated = bytearray(preimage)
        mutated[pos] ^= 0x01
        try:
            reader = ByteReader(bytes(mutated) + signed.public_key + signed.signature)
            decoded = decode_transaction(reader)
            reader.expect_end()
        except (CodecError, ChainError):
            continue
        assert not verify_transaction(decoded)
        assert decoded.tx_hash != signed.tx_hash


def test_transfer_round_trip_preserves_identity():
    signed = sign_transaction(
        SignedTransaction(sender=KEY.address, nonce=9, action=Transfer(to=OTHER.address), value_wei=123),
        KEY,
    )
    reader = ByteReader(signed.wire_bytes())
    decoded = decode_transaction(reader)
    reader.expect_end()
    assert decoded == signed
    assert verify_transaction(decoded)
