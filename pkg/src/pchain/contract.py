"""Supply-chain contract state machine.

Companies, products, seller registries, the four lifecycle rules
(enroll / distribute / register / buy), the gas schedule, execution
receipts, and the state root commitment.

Value semantics: callers escrow a transaction's attached value before
`apply_action` runs; on success the action credits it where it belongs
(registration fees and purchase payments go to the manufacturer), on
ContractError the caller refunds the escrow. No gas accounting happens
here; fees are charged by block execution.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from enum import Enum

from .codec import ByteReader, ByteWriter, HASH_LEN
from .errors import ContractError
from .tx import (
    Action,
    BuyProduct,
    CreateCompany,
    DistributeProduct,
    EnrollProduct,
    RegisterSeller,
    Transfer,
)

MAX_NAME_BYTES = 64


class ProductStatus(Enum):
    READY_TO_GO = "ReadyToGo"
    SHIPPED = "Shipped"


class OrderStatus(Enum):
    NONE = "None"
    PENDING = "Pending"
    COMPLETE = "Complete"


_STATUS_BYTES = {ProductStatus.READY_TO_GO: 0, ProductStatus.SHIPPED: 1}
_STATUS_FROM_BYTE = {v: k for k, v in _STATUS_BYTES.items()}
_ORDER_BYTES = {OrderStatus.NONE: 0, OrderStatus.PENDING: 1, OrderStatus.COMPLETE: 2}
_ORDER_FROM_BYTE = {v: k for k, v in _ORDER_BYTES.items()}


@dataclass
class Product:
    id: int
    name: str
    price_wei: int
    stock: int
    status: ProductStatus
    order_status: OrderStatus
    owner_name: str
    owner_address: bytes

    def clone(self) -> "Product":
        return Product(
            id=self.id, name=self.name, price_wei=self.price_wei, stock=self.stock,
            status=self.status, order_status=self.order_status,
            owner_name=self.owner_name, owner_address=self.owner_address,
        )


@dataclass
class Company:
    contract_address: bytes
    name: str
    manufacturer: bytes
    min_registration_fee_wei: int
    sellers: dict[bytes, bool] = field(default_factory=dict)
    products: list[Product] = field(default_factory=list)

    def clone(self) -> "Company":
        return Company(
            contract_address=self.contract_address, name=self.name,
            manufacturer=self.manufacturer,
            min_registration_fee_wei=self.min_registration_fee_wei,
            sellers=dict(self.sellers),
            products=[p.clone() for p in self.products],
        )

    def product(self, product_id: int) -> Product | None:
        if 0 <= product_id < len(self.products):
            return self.products[product_id]
        return None


@dataclass(frozen=True)
class GasSchedule:
    """Per-operation gas costs; fee = gas x gas price.

    The six published figures are fixed; `transfer` covers plain value moves,
    which the published table has no row for (flat Ethereum intrinsic cost).
    """

    deploy_system: int = 133405
    add_company: int = 1068597
    seller_registration: int = 45755
    product_enrollment: int = 208571
    buy_product: int = 41581
    product_distribution: int = 55578
    transfer: int = 21000
    gas_price_wei: int = 10**9

    def gas_for_action(self, action: Action) -> int:
        if isinstance(action, CreateCompany):
            return self.add_company
        if isinstance(action, EnrollProduct):
            return self.product_enrollment
        if isinstance(action, RegisterSeller):
            return self.seller_registration
        if isinstance(action, BuyProduct):
            return self.buy_product
        if isinstance(action, DistributeProduct):
            return self.product_distribution
        if isinstance(action, Transfer):
            return self.transfer
        raise ContractError("UnknownAction", f"no gas cost for {type(action).__name__}")

    def fee_for_action(self, action: Action) -> int:
        return self.gas_for_action(action) * self.gas_price_wei


@dataclass(frozen=True)
class ExecutionReceipt:
    tx_hash: bytes
    success: bool
    gas_used: int
    fee_wei: int
    error: str | None = None
    company: bytes | None = None
    product_id: int | None = None

    def encode(self, w: ByteWriter) -> None:
        w.fixed(self.tx_hash, HASH_LEN)
        w.u8(1 if self.success else 0)
        w.u64(self.gas_used)
        w.u128(self.fee_wei)
        w.string(self.error or "")
        w.u8(1 if self.company is not None else 0)
        if self.company is not None:
            w.address(self.company)
        w.u8(1 if self.product_id is not None else 0)
        if self.product_id is not None:
            w.u64(self.product_id)

    @classmethod
    def decode(cls, r: ByteReader) -> "ExecutionReceipt":
        tx_hash = r.fixed(HASH_LEN)
        success_byte = r.u8()
        if success_byte not in (0, 1):
            raise ContractError("Malformed", f"bad success flag {success_byte}")
        gas_used = r.u64()
        fee_wei = r.u128()
        error = r.string() or None
        company = r.address() if _decode_flag(r) else None
        product_id = r.u64() if _decode_flag(r) else None
        return cls(
            tx_hash=tx_hash, success=success_byte == 1, gas_used=gas_used,
            fee_wei=fee_wei, error=error, company=company, product_id=product_id,
        )


def _decode_flag(r: ByteReader) -> bool:
    flag = r.u8()
    if flag not in (0, 1):
        raise ContractError("Malformed", f"bad presence flag {flag}")
    return flag == 1


class LedgerState:
    """Companies, balances, and account nonces; all mutation happens here."""

    def __init__(self) -> None:
        self.companies: list[Company] = []
        self._by_address: dict[bytes, Company] = {}
        self.balances: dict[bytes, int] = {}
        self.nonces: dict[bytes, int] = {}

    def clone(self) -> "LedgerState":
        out = LedgerState()
        for company in self.companies:
            copied = company.clone()
            out.companies.append(copied)
            out._by_address[copied.contract_address] = copied
        out.balances = dict(self.balances)
        out.nonces = dict(self.nonces)
        return out

    def company(self, address: bytes) -> Company | None:
        return self._by_address.get(address)

    def add_company(self, company: Company) -> None:
        self.companies.append(company)
        self._by_address[company.contract_address] = company

    def balance(self, address: bytes) -> int:
        return self.balances.get(address, 0)

    def nonce(self, address: bytes) -> int:
        return self.nonces.get(address, 0)

    def credit(self, address: bytes, amount: int) -> None:
        self.balances[address] = self.balance(address) + amount

    def debit(self, address: bytes, amount: int) -> None:
        current = self.balance(address)
        if amount > current:
            raise ContractError("InsufficientBalance", "balance would go negative")
        self.balances[address] = current - amount


def _check_name(name: str) -> None:
    raw = name.encode("utf-8")
    if not raw or len(raw) > MAX_NAME_BYTES:
        raise ContractError("NameInvalid", f"name must be 1..{MAX_NAME_BYTES} UTF-8 bytes")


def derive_contract_address(sender: bytes, nonce: int) -> bytes:
    """First 20 bytes of SHA-256(sender bytes | nonce as 8-byte big-endian)."""
    return hashlib.sha256(sender + nonce.to_bytes(8, "big")).digest()[:20]


def create_company(state: LedgerState, sender: bytes, nonce: int, name: str, min_fee_wei: int) -> bytes:
    _check_name(name)
    address = derive_contract_address(sender, nonce)
    state.add_company(Company(
        contract_address=address, name=name, manufacturer=sender,
        min_registration_fee_wei=min_fee_wei,
    ))
    return address


def enroll_product(
    state: LedgerState, sender: bytes, company_addr: bytes, name: str, price_wei: int, stock: int
) -> int:
    company = state.company(company_addr)
    if company is None:
        raise ContractError("UnknownCompany", "no company at that address")
    if sender != company.manufacturer:
        raise ContractError("Unauthorized", "only the manufacturer may enroll products")
    _check_name(name)
    if stock < 1:
        raise ContractError("ZeroStock", "stock must be at least 1")
    product_id = len(company.products)
    company.products.append(Product(
        id=product_id, name=name, price_wei=price_wei, stock=stock,
        status=ProductStatus.READY_TO_GO, order_status=OrderStatus.NONE,
        owner_name=company.name, owner_address=company.manufacturer,
    ))
    return product_id


def register_seller(state: LedgerState, sender: bytes, company_addr: bytes, value_wei: int) -> None:
    company = state.company(company_addr)
    if company is None:
        raise ContractError("UnknownCompany", "no company at that address")
    if sender in company.sellers:
        raise ContractError("AlreadyRegistered", "sender is already a registered seller")
    if value_wei < company.min_registration_fee_wei:
        raise ContractError("FeeTooLow", "registration fee is below the company minimum")
    company.sellers[sender] = True
    state.credit(company.manufacturer, value_wei)


def buy_product(
    state: LedgerState, sender: bytes, company_addr: bytes, product_id: int,
    seller_name: str, quantity: int, value_wei: int,
) -> None:
    company = state.company(company_addr)
    if company is None:
        raise ContractError("UnknownCompany", "no company at that address")
    if product_id >= len(company.products):
        raise ContractError("UnknownProduct", "no product with that id")
    product = company.products[product_id]
    if sender not in company.sellers:
        raise ContractError("NotRegisteredSeller", "sender is not a registered seller")
    if value_wei < product.price_wei * quantity:
        raise ContractError("ValueTooLow", "attached value is below price x quantity")
    if quantity > product.stock:
        raise ContractError("InsufficientStock", "quantity exceeds remaining stock")
    if product.status is ProductStatus.SHIPPED:
        raise ContractError("AlreadyShipped", "product order is already shipped and closed")
    if quantity < 1:
        raise ContractError("ZeroQuantity", "quantity must be at least 1")
    _check_name(seller_name)
    product.owner_name = seller_name
    product.owner_address = sender
    product.order_status = OrderStatus.PENDING
    product.stock -= quantity
    state.credit(company.manufacturer, value_wei)


def distribute_product(state: LedgerState, sender: bytes, company_addr: bytes, product_id: int) -> None:
    company = state.company(company_addr)
    if company is None:
        raise ContractError("UnknownCompany", "no company at that address")
    if sender != company.manufacturer:
        raise ContractError("Unauthorized", "only the manufacturer may distribute")
    if product_id >= len(company.products):
        raise ContractError("UnknownProduct", "no product with that id")
    product = company.products[product_id]
    if product.order_status is not OrderStatus.PENDING:
        raise ContractError("NoPendingOrder", "no pending order to ship")
    product.status = ProductStatus.SHIPPED
    product.order_status = OrderStatus.COMPLETE


def apply_action(
    state: LedgerState, sender: bytes, nonce: int, action: Action, value_wei: int
) -> tuple[bytes | None, int | None]:
    """Dispatch one action; returns (company, product_id) emitted on success.

    The attached value must already be debited from the sender; a raised
    ContractError leaves `state` untouched and obliges the caller to refund.
    """
    if isinstance(action, CreateCompany):
        address = create_company(state, sender, nonce, action.name, action.min_fee_wei)
        if value_wei:
            state.credit(sender, value_wei)  # action takes no payment; return attached value
        return address, None
    if isinstance(action, EnrollProduct):
        product_id = enroll_product(state, sender, action.company, action.name, action.price_wei, action.stock)
        if value_wei:
            state.credit(sender, value_wei)
        return action.company, product_id
    if isinstance(action, RegisterSeller):
        register_seller(state, sender, action.company, value_wei)
        return action.company, None
    if isinstance(action, BuyProduct):
        buy_product(state, sender, action.company, action.product_id, action.seller_name, action.quantity, value_wei)
        return action.company, action.product_id
    if isinstance(action, DistributeProduct):
        distribute_product(state, sender, action.company, action.product_id)
        if value_wei:
            state.credit(sender, value_wei)
        return action.company, action.product_id
    if isinstance(action, Transfer):
        state.credit(action.to, value_wei)
        return None, None
    raise ContractError("UnknownAction", f"cannot execute {type(action).__name__}")


def compute_state_root(state: LedgerState) -> bytes:
    """SHA-256 over the canonical state encoding.

    Companies sorted by contract address, sellers sorted by address, products
    in id order, then balances sorted by address (zero balances skipped).
    """
    w = ByteWriter()
    companies = sorted(state.companies, key=lambda c: c.contract_address)
    w.u64(len(companies))
    for company in companies:
        w.address(company.contract_address)
        w.string(company.name)
        w.address(company.manufacturer)
        w.u128(company.min_registration_fee_wei)
        sellers = sorted(company.sellers)
        w.u64(len(sellers))
        for seller in sellers:
            w.address(seller)
            w.u8(1 if company.sellers[seller] else 0)
        w.u64(len(company.products))
        for product in company.products:
            w.u64(product.id)
            w.string(product.name)
            w.u128(product.price_wei)
            w.u64(product.stock)
            w.u8(_STATUS_BYTES[product.status])
            w.u8(_ORDER_BYTES[product.order_status])
            w.string(product.owner_name)
            w.address(product.owner_address)
    funded = sorted(addr for addr, amount in state.balances.items() if amount)
    w.u64(len(funded))
    for addr in funded:
        w.address(addr)
        w.u128(state.balances[addr])
    return hashlib.sha256(w.getvalue()).digest()


def status_from_byte(value: int) -> ProductStatus:
    if value not in _STATUS_FROM_BYTE:
        raise ContractError("Malformed", f"bad status byte {value}")
    return _STATUS_FROM_BYTE[value]


def status_to_byte(status: ProductStatus) -> int:
    return _STATUS_BYTES[status]


def order_from_byte(value: int) -> OrderStatus:
    if value not in _ORDER_FROM_BYTE:
        raise ContractError("Malformed", f"bad order status byte {value}")
    return _ORDER_FROM_BYTE[value]


def order_to_byte(order: OrderStatus) -> int:
    return _ORDER_BYTES[order]
