"""HTTP wire models and conversions to/from core types.

Binary fields travel as 0x-prefixed lowercase hex; wei amounts as decimal
strings (they exceed JSON-safe integer range). Conversion failures raise
WireError, which the app maps to HTTP 400.
"""

from __future__ import annotations

import re
from typing import Literal, Union

from pydantic import BaseModel, Field

from ..chain import Block
from ..contract import Company, ExecutionReceipt, Product
from ..errors import ChainError
from ..qr import QRPayload, Verdict
from ..tx import (
    Action,
    BuyProduct,
    CreateCompany,
    DistributeProduct,
    EnrollProduct,
    RegisterSeller,
    SignedTransaction,
    Transfer,
)

MAX_WEI = 2**128 - 1
_HEX_RE = re.compile(r"^0x[0-9a-f]*$")
_WEI_RE = re.compile(r"^(0|[1-9][0-9]*)$")


class WireError(ChainError):
    pass


def to_hex(value: bytes) -> str:
    return "0x" + value.hex()


def from_hex(value: str, expected_len: int | None = None, field: str = "value") -> bytes:
    if not isinstance(value, str) or not _HEX_RE.fullmatch(value) or len(value) % 2:
        raise WireError("BadHex", f"{field} must be 0x-prefixed lowercase hex")
    raw = bytes.fromhex(value[2:])
    if expected_len is not None and len(raw) != expected_len:
        raise WireError("BadHex", f"{field} must be {expected_len} bytes, got {len(raw)}")
    return raw


def parse_wei(value: str, field: str = "amount") -> int:
    if not isinstance(value, str) or not _WEI_RE.fullmatch(value):
        raise WireError("BadAmount", f"{field} must be a decimal string of wei")
    amount = int(value)
    if amount > MAX_WEI:
        raise WireError("BadAmount", f"{field} exceeds 2^128 - 1 wei")
    return amount


# -- transaction submission -------------------------------------------------

class CreateCompanyModel(BaseModel):
    type: Literal["CreateCompany"]
    name: str
    min_fee_wei: str


class EnrollProductModel(BaseModel):
    type: Literal["EnrollProduct"]
    company: str
    name: str
    price_wei: str
    stock: int


class RegisterSellerModel(BaseModel):
    type: Literal["RegisterSeller"]
    company: str


class BuyProductModel(BaseModel):
    type: Literal["BuyProduct"]
    company: str
    product_id: int
    seller_name: str
    quantity: int


class DistributeProductModel(BaseModel):
    type: Literal["DistributeProduct"]
    company: str
    product_id: int


class TransferModel(BaseModel):
    type: Literal["Transfer"]
    to: str


ActionModel = Union[
    CreateCompanyModel, EnrollProductModel, RegisterSellerModel,
    BuyProductModel, DistributeProductModel, TransferModel,
]


def action_from_model(model: ActionModel) -> Action:
    if isinstance(model, CreateCompanyModel):
        return CreateCompany(name=model.name, min_fee_wei=parse_wei(model.min_fee_wei, "min_fee_wei"))
    if isinstance(model, EnrollProductModel):
        return EnrollProduct(
            company=from_hex(model.company, 20, "company"), name=model.name,
            price_wei=parse_wei(model.price_wei, "price_wei"), stock=model.stock,
        )
    if isinstance(model, RegisterSellerModel):
        return RegisterSeller(company=from_hex(model.company, 20, "company"))
    if isinstance(model, BuyProductModel):
        return BuyProduct(
            company=from_hex(model.company, 20, "company"), product_id=model.product_id,
            seller_name=model.seller_name, quantity=model.quantity,
        )
    if isinstance(model, DistributeProductModel):
        return DistributeProduct(company=from_hex(model.company, 20, "company"), product_id=model.product_id)
    return Transfer(to=from_hex(model.to, 20, "to"))


def action_to_model(action: Action) -> dict:
    if isinstance(action, CreateCompany):
        return {"type": "CreateCompany", "name": action.name, "min_fee_wei": str(action.min_fee_wei)}
    if isinstance(action, EnrollProduct):
        return {
            "type": "EnrollProduct", "company": to_hex(action.company), "name": action.name,
            "price_wei": str(action.price_wei), "stock": action.stock,
        }
    if isinstance(action, RegisterSeller):
        return {"type": "RegisterSeller", "company": to_hex(action.company)}
    if isinstance(action, BuyProduct):
        return {
            "type": "BuyProduct", "company": to_hex(action.company), "product_id": action.product_id,
            "seller_name": action.seller_name, "quantity": action.quantity,
        }
    if isinstance(action, DistributeProduct):
        return {"type": "DistributeProduct", "company": to_hex(action.company), "product_id": action.product_id}
    return {"type": "Transfer", "to": to_hex(action.to)}


class TxSubmitRequest(BaseModel):
    sender: str
    nonce: int
    action: ActionModel = Field(discriminator="type")
    value_wei: str
    public_key: str
    signature: str

    def to_transaction(self) -> SignedTransaction:
        if self.nonce < 0:
            raise WireError("BadAmount", "nonce must be non-negative")
        return SignedTransaction(
            sender=from_hex(self.sender, 20, "sender"),
            nonce=self.nonce,
            action=action_from_model(self.action),
            value_wei=parse_wei(self.value_wei, "value_wei"),
            public_key=from_hex(self.public_key, 32, "public_key"),
            signature=from_hex(self.signature, 64, "signature"),
        )


class TxAccepted(BaseModel):
    tx_hash: str


# -- chain objects ------------------------------------------------------------

class TransactionModel(BaseModel):
    tx_hash: str
    sender: str
    nonce: int
    action: dict
    value_wei: str
    public_key: str
    signature: str


class ReceiptModel(BaseModel):
    tx_hash: str
    height: int
    success: bool
    gas_used: int
    fee_wei: str
    error: str | None = None
    company: str | None = None
    product_id: int | None = None


class BlockSummary(BaseModel):
    height: int
    block_hash: str
    prev_hash: str
    timestamp: int
    state_root: str
    tx_count: int


class BlockDetail(BlockSummary):
    transactions: list[TransactionModel]
    receipts: list[ReceiptModel]


def transaction_model(tx: SignedTransaction) -> TransactionModel:
    return TransactionModel(
        tx_hash=to_hex(tx.tx_hash), sender=to_hex(tx.sender), nonce=tx.nonce,
        action=action_to_model(tx.action), value_wei=str(tx.value_wei),
        public_key=to_hex(tx.public_key or b""), signature=to_hex(tx.signature or b""),
    )


def receipt_model(receipt: ExecutionReceipt, height: int) -> ReceiptModel:
    return ReceiptModel(
        tx_hash=to_hex(receipt.tx_hash), height=height, success=receipt.success,
        gas_used=receipt.gas_used, fee_wei=str(receipt.fee_wei), error=receipt.error,
        company=to_hex(receipt.company) if receipt.company is not None else None,
        product_id=receipt.product_id,
    )


def block_summary(block: Block) -> BlockSummary:
    return BlockSummary(
        height=block.height, block_hash=to_hex(block.block_hash),
        prev_hash=to_hex(block.prev_hash), timestamp=block.timestamp,
        state_root=to_hex(block.state_root), tx_count=len(block.transactions),
    )


def block_detail(block: Block) -> BlockDetail:
    return BlockDetail(
        **block_summary(block).model_dump(),
        transactions=[transaction_model(tx) for tx in block.transactions],
        receipts=[receipt_model(r, block.height) for r in block.receipts],
    )


# -- contract state -----------------------------------------------------------

class ProductModel(BaseModel):
    id: int
    name: str
    price_wei: str
    stock: int
    status: str
    order_status: str
    owner_name: str
    owner_address: str


class SellerModel(BaseModel):
    address: str
    registered: bool


class CompanyModel(BaseModel):
    contract_address: str
    name: str
    manufacturer: str
    min_fee_wei: str
    sellers: list[SellerModel]
    products: list[ProductModel]


def product_model(product: Product) -> ProductModel:
    return ProductModel(
        id=product.id, name=product.name, price_wei=str(product.price_wei),
        stock=product.stock, status=product.status.value,
        order_status=product.order_status.value,
        owner_name=product.owner_name, owner_address=to_hex(product.owner_address),
    )


def company_model(company: Company) -> CompanyModel:
    return CompanyModel(
        contract_address=to_hex(company.contract_address), name=company.name,
        manufacturer=to_hex(company.manufacturer),
        min_fee_wei=str(company.min_registration_fee_wei),
        sellers=[SellerModel(address=to_hex(a), registered=v) for a, v in sorted(company.sellers.items())],
        products=[product_model(p) for p in company.products],
    )


# -- QR -----------------------------------------------------------------------

class QRPayloadModel(BaseModel):
    version: int
    company: str
    product_id: int
    manufacturer: str
    owner_address: str
    owner_name: str
    status: str
    order_status: str
    issued_at_height: int
    checksum: str


class QRTextResponse(BaseModel):
    payload: str


class VerifyRequest(BaseModel):
    payload: str


class VerdictResponse(BaseModel):
    verdict: str
    mismatched_fields: list[str]
    reason: str | None = None
    payload: QRPayloadModel


def payload_model(payload: QRPayload) -> QRPayloadModel:
    return QRPayloadModel(
        version=payload.version, company=to_hex(payload.company),
        product_id=payload.product_id, manufacturer=to_hex(payload.manufacturer),
        owner_address=to_hex(payload.owner_address), owner_name=payload.owner_name,
        status=payload.status.value, order_status=payload.order_status.value,
        issued_at_height=payload.issued_at_height, checksum=to_hex(payload.checksum),
    )


def verdict_response(payload: QRPayload, verdict: Verdict) -> VerdictResponse:
    return VerdictResponse(
        verdict=verdict.kind.value,
        mismatched_fields=list(verdict.mismatched_fields),
        reason=verdict.reason,
        payload=payload_model(payload),
    )


# -- everything else ----------------------------------------------------------

class FaucetRequest(BaseModel):
    address: str
    amount_wei: str


class AccountModel(BaseModel):
    address: str
    balance_wei: str
    nonce: int


class GasScheduleModel(BaseModel):
    deploy_system: int
    add_company: int
    seller_registration: int
    product_enrollment: int
    buy_product: int
    product_distribution: int
    transfer: int
    gas_price_wei: str


class CostRowModel(BaseModel):
    description: str
    gas: int
    fee_eth: str
    fee_usd: str
    reference_fee_eth: str
    reference_fee_usd: str
    note: str | None = None


class CostTotalsModel(BaseModel):
    fee_eth: str
    fee_usd: str
    reference_fee_eth: str
    reference_fee_usd: str


class CostReportModel(BaseModel):
    gas_price_wei: str
    eth_usd_rate: str
    rows: list[CostRowModel]
    totals: CostTotalsModel


class ValidationModel(BaseModel):
    ok: bool
    height: int | None = None
    reason: str | None = None


class ErrorDetail(BaseModel):
    code: str
    message: str


class ErrorResponse(BaseModel):
    error: ErrorDetail
