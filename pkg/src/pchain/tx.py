"""Transaction actions, canonical serialization, and signing.

The signed preimage is: sender(20) | nonce(u64) | action tag(u8) | action
fields in declared order | value_wei(u128). The transaction hash is SHA-256
of that preimage. The wire form appends the signer's raw public key and the
64-byte signature; the public key travels outside the preimage because the
sender address already commits to it (Ed25519 offers no key recovery).
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, replace
from typing import Union

from .codec import ByteReader, ByteWriter, PUBKEY_LEN, SIGNATURE_LEN
from .errors import ChainError, CodecError
from .keys import KeyPair, derive_address, verify_signature


@dataclass(frozen=True)
class CreateCompany:
    name: str
    min_fee_wei: int


@dataclass(frozen=True)
class EnrollProduct:
    company: bytes
    name: str
    price_wei: int
    stock: int


@dataclass(frozen=True)
class RegisterSeller:
    company: bytes


@dataclass(frozen=True)
class BuyProduct:
    company: bytes
    product_id: int
    seller_name: str
    quantity: int


@dataclass(frozen=True)
class DistributeProduct:
    company: bytes
    product_id: int


@dataclass(frozen=True)
class Transfer:
    to: bytes


Action = Union[CreateCompany, EnrollProduct, RegisterSeller, BuyProduct, DistributeProduct, Transfer]

ACTION_TAGS: dict[type, int] = {
    CreateCompany: 0,
    EnrollProduct: 1,
    RegisterSeller: 2,
    BuyProduct: 3,
    DistributeProduct: 4,
    Transfer: 5,
}


def encode_action(writer: ByteWriter, action: Action) -> None:
    writer.u8(ACTION_TAGS[type(action)])
    if isinstance(action, CreateCompany):
        writer.string(action.name)
        writer.u128(action.min_fee_wei)
    elif isinstance(action, EnrollProduct):
        writer.address(action.company)
        writer.string(action.name)
        writer.u128(action.price_wei)
        writer.u64(action.stock)
    elif isinstance(action, RegisterSeller):
        writer.address(action.company)
    elif isinstance(action, BuyProduct):
        writer.address(action.company)
        writer.u64(action.product_id)
        writer.string(action.seller_name)
        writer.u64(action.quantity)
    elif isinstance(action, DistributeProduct):
        writer.address(action.company)
        writer.u64(action.product_id)
    elif isinstance(action, Transfer):
        writer.address(action.to)
    else:  # pragma: no cover - exhaustive over Action
        raise CodecError("UnknownAction", f"cannot encode {type(action).__name__}")


def decode_action(reader: ByteReader) -> Action:
    tag = reader.u8()
    if tag == 0:
        return CreateCompany(name=reader.string(), min_fee_wei=reader.u128())
    if tag == 1:
        return EnrollProduct(
            company=reader.address(), name=reader.string(), price_wei=reader.u128(), stock=reader.u64()
        )
    if tag == 2:
        return RegisterSeller(company=reader.address())
    if tag == 3:
        return BuyProduct(
            company=reader.address(), product_id=reader.u64(), seller_name=reader.string(), quantity=reader.u64()
        )
    if tag == 4:
        return DistributeProduct(company=reader.address(), product_id=reader.u64())
    if tag == 5:
        return Transfer(to=reader.address())
    raise CodecError("UnknownAction", f"unknown action tag {tag}")


@dataclass(frozen=True)
class SignedTransaction:
    """A sender-authenticated, nonce-ordered action with attached value in wei."""

    sender: bytes
    nonce: int
    action: Action
    value_wei: int
    public_key: bytes | None = None
    signature: bytes | None = None

    def signing_bytes(self) -> bytes:
        """Canonical preimage covered by the signature and the tx hash."""
        w = ByteWriter()
        w.address(self.sender)
        w.u64(self.nonce)
        encode_action(w, self.action)
        w.u128(self.value_wei)
        return w.getvalue()

    @property
    def tx_hash(self) -> bytes:
        return hashlib.sha256(self.signing_bytes()).digest()

    def wire_bytes(self) -> bytes:
        """Full encoding including public key and signature (block/log form)."""
        if self.public_key is None or self.signature is None:
            raise ChainError("Unsigned", "transaction has no signature attached")
        return self.signing_bytes() + self.public_key + self.signature


def canonical_serialize(tx: SignedTransaction) -> bytes:
    """Spec-facing alias for the canonical preimage."""
    return tx.signing_bytes()


def decode_transaction(reader: ByteReader) -> SignedTransaction:
    sender = reader.address()
    nonce = reader.u64()
    action = decode_action(reader)
    value_wei = reader.u128()
    public_key = reader.fixed(PUBKEY_LEN)
    signature = reader.fixed(SIGNATURE_LEN)
    return SignedTransaction(
        sender=sender, nonce=nonce, action=action, value_wei=value_wei,
        public_key=public_key, signature=signature,
    )


def sign_transaction(tx: SignedTransaction, key: KeyPair) -> SignedTransaction:
    """Attach public key and signature; the key's address must match tx.sender."""
    if key.address != tx.sender:
        raise ChainError("SenderKeyMismatch", "signing key does not derive the sender address")
    signature = key.sign(tx.signing_bytes())
    return replace(tx, public_key=key.public_key, signature=signature)


def verify_transaction(tx: SignedTransaction) -> bool:
    """Signature valid under a public key whose derived address equals sender."""
    if tx.public_key is None or tx.signature is None:
        return False
    if derive_address(tx.public_key) != tx.sender:
        return False
    return verify_signature(tx.public_key, tx.signing_bytes(), tx.signature)
