"""Consumer-facing QR provenance payload: issue, encode, decode, verify.

The QR symbol carries the text "pcv1:" + base64url(canonical payload bytes),
unpadded. The last 4 payload bytes are a SHA-256 checksum of everything
before them, so casual tampering is caught at decode time; verification then
compares the decoded claim against live chain state. A product counts as
genuine only when every recorded field matches the chain and the chain says
(Shipped, Complete).
"""

from __future__ import annotations

import base64
import hashlib
from dataclasses import dataclass, replace
from enum import Enum

from .codec import ByteReader, ByteWriter
from .contract import (
    LedgerState,
    OrderStatus,
    ProductStatus,
    order_from_byte,
    order_to_byte,
    status_from_byte,
    status_to_byte,
)
from .errors import ContractError, QRError

QR_VERSION = 1
CHECKSUM_LEN = 4


@dataclass(frozen=True)
class QRPayload:
    version: int
    company: bytes
    product_id: int
    manufacturer: bytes
    owner_address: bytes
    owner_name: str
    status: ProductStatus
    order_status: OrderStatus
    issued_at_height: int
    checksum: bytes

    def body_bytes(self) -> bytes:
        w = ByteWriter()
        w.u8(self.version)
        w.address(self.company)
        w.u64(self.product_id)
        w.address(self.manufacturer)
        w.address(self.owner_address)
        w.string(self.owner_name)
        w.u8(status_to_byte(self.status))
        w.u8(order_to_byte(self.order_status))
        w.u64(self.issued_at_height)
        return w.getvalue()

    def canonical_bytes(self) -> bytes:
        return self.body_bytes() + self.checksum

    def with_checksum(self) -> "QRPayload":
        return replace(self, checksum=compute_checksum(self))


def compute_checksum(payload: QRPayload) -> bytes:
    return hashlib.sha256(payload.body_bytes()).digest()[:CHECKSUM_LEN]


def issue_payload(state: LedgerState, company_addr: bytes, product_id: int, height: int) -> QRPayload:
    """Snapshot the product's provenance fields at the current chain tip."""
    company = state.company(company_addr)
    if company is None:
        raise ContractError("UnknownCompany", "no company at that address")
    if product_id >= len(company.products):
        raise ContractError("UnknownProduct", "no product with that id")
    product = company.products[product_id]
    payload = QRPayload(
        version=QR_VERSION,
        company=company_addr,
        product_id=product_id,
        manufacturer=company.manufacturer,
        owner_address=product.owner_address,
        owner_name=product.owner_name,
        status=product.status,
        order_status=product.order_status,
        issued_at_height=height,
        checksum=b"",
    )
    return payload.with_checksum()


def encode_text(payload: QRPayload) -> str:
    """"pcv1:" + unpadded base64url of the canonical payload bytes."""
    body = base64.urlsafe_b64encode(payload.canonical_bytes()).rstrip(b"=").decode("ascii")
    return f"pcv{payload.version}:{body}"


def decode_text(text: str) -> QRPayload:
    if not text.startswith("pcv"):
        raise QRError("BadPrefix", "payload text must start with 'pcv<version>:'")
    head, sep, body = text.partition(":")
    if not sep or not head[3:].isdigit():
        raise QRError("BadPrefix", "payload text must start with 'pcv<version>:'")
    if int(head[3:]) != QR_VERSION:
        raise QRError("UnsupportedVersion", f"unsupported payload version {head[3:]}")
    try:
        raw = base64.urlsafe_b64decode(body + "=" * (-len(body) % 4))
    except Exception as exc:
        raise QRError("BadBase64", "payload body is not valid base64url") from exc
    # Re-encode to reject non-canonical base64 (padding tricks, stray trailing bits).
    if base64.urlsafe_b64encode(raw).rstrip(b"=").decode("ascii") != body:
        raise QRError("BadBase64", "payload body is not canonical base64url")
    try:
        r = ByteReader(raw)
        version = r.u8()
        payload = QRPayload(
            version=version,
            company=r.address(),
            product_id=r.u64(),
            manufacturer=r.address(),
            owner_address=r.address(),
            owner_name=r.string(),
            status=status_from_byte(r.u8()),
            order_status=order_from_byte(r.u8()),
            issued_at_height=r.u64(),
            checksum=r.fixed(CHECKSUM_LEN),
        )
        r.expect_end()
    except (QRError,):
        raise
    except Exception as exc:
        raise QRError("BadBase64", f"payload bytes are malformed: {exc}") from exc
    if payload.version != QR_VERSION:
        raise QRError("UnsupportedVersion", f"unsupported payload version {payload.version}")
    if payload.checksum != compute_checksum(payload):
        raise QRError("ChecksumMismatch", "payload checksum does not match its contents")
    return payload


class VerdictKind(Enum):
    GENUINE = "Genuine"
    MISMATCH = "Mismatch"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    mismatched_fields: tuple[str, ...] = ()
    reason: str | None = None


def verify_payload(payload: QRPayload, state: LedgerState) -> Verdict:
    """Compare a decoded payload against current chain state.

    Unknown when the company or product cannot be found; Mismatch listing
    every differing field; Genuine only for a full match with the product
    Shipped and the order Complete.
    """
    company = state.company(payload.company)
    if company is None:
        return Verdict(VerdictKind.UNKNOWN, reason="UnknownCompany")
    if payload.product_id >= len(company.products):
        return Verdict(VerdictKind.UNKNOWN, reason="UnknownProduct")
    product = company.products[payload.product_id]

    mismatched = []
    if payload.manufacturer != company.manufacturer:
        mismatched.append("manufacturer")
    if payload.owner_address != product.owner_address:
        mismatched.append("owner_address")
    if payload.owner_name != product.owner_name:
        mismatched.append("owner_name")
    if payload.status is not product.status:
        mismatched.append("status")
    if payload.order_status is not product.order_status:
        mismatched.append("order_status")
    if mismatched:
        return Verdict(VerdictKind.MISMATCH, mismatched_fields=tuple(mismatched))
    if product.status is ProductStatus.SHIPPED and product.order_status is OrderStatus.COMPLETE:
        return Verdict(VerdictKind.GENUINE)
    return Verdict(VerdictKind.UNKNOWN, reason="NotYetShipped")
