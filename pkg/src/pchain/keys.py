"""Ed25519 key pairs and the 20-byte account addresses derived from them.

An address is the first 20 bytes of SHA-256 over the raw 32-byte public key;
its text form is 0x-prefixed lowercase hex (42 characters) and round-trips
exactly: parsing rejects anything the formatter would not emit.
"""

from __future__ import annotations

import hashlib
import os
import re
from dataclasses import dataclass

from cryptography.exceptions import InvalidSignature
from cryptography.hazmat.primitives.asymmetric.ed25519 import (
    Ed25519PrivateKey,
    Ed25519PublicKey,
)

from .codec import ADDRESS_LEN, PUBKEY_LEN
from .errors import ChainError

SEED_LEN = 32

_ADDRESS_RE = re.compile(r"^0x[0-9a-f]{40}$")


def derive_address(public_key: bytes) -> bytes:
    """First 20 bytes of SHA-256(public_key)."""
    if len(public_key) != PUBKEY_LEN:
        raise ChainError("KeyInvalid", f"public key must be {PUBKEY_LEN} bytes, got {len(public_key)}")
    return hashlib.sha256(public_key).digest()[:ADDRESS_LEN]


def address_to_hex(address: bytes) -> str:
    if len(address) != ADDRESS_LEN:
        raise ChainError("KeyInvalid", f"address must be {ADDRESS_LEN} bytes, got {len(address)}")
    return "0x" + address.hex()


def address_from_hex(text: str) -> bytes:
    if not _ADDRESS_RE.match(text):
        raise ChainError("KeyInvalid", f"malformed address: {text!r}")
    return bytes.fromhex(text[2:])


@dataclass(frozen=True)
class KeyPair:
    """Ed25519 signing key (seed form) plus its verification key."""

    seed: bytes
    public_key: bytes

    @property
    def address(self) -> bytes:
        return derive_address(self.public_key)

    def sign(self, message: bytes) -> bytes:
        return Ed25519PrivateKey.from_private_bytes(self.seed).sign(message)


def generate_keypair(seed: bytes | None = None) -> KeyPair:
    """Key pair from a 32-byte seed; cryptographically random when seed is None."""
    if seed is None:
        seed = os.urandom(SEED_LEN)
    elif len(seed) != SEED_LEN:
        raise ChainError("SeedInvalid", f"seed must be {SEED_LEN} bytes, got {len(seed)}")
    private = Ed25519PrivateKey.from_private_bytes(seed)
    public = private.public_key().public_bytes_raw()
    return KeyPair(seed=seed, public_key=public)


def verify_signature(public_key: bytes, message: bytes, signature: bytes) -> bool:
    if len(public_key) != PUBKEY_LEN or len(signature) != 64:
        return False
    try:
        Ed25519PublicKey.from_public_bytes(public_key).verify(signature, message)
        return True
    except (InvalidSignature, ValueError):
        return False
