"""Append-only hash-chained ledger: blocks, mempool, production, validation.

Single authorized producer. Block hash = SHA-256 over the canonical header
(height, prev_hash, timestamp, transaction-list hash, state_root). Failed
contract calls are included with a failure receipt and still charge the full
scheduled gas; fees flow from senders to the producer address.
"""

from __future__ import annotations

import hashlib
import time
from dataclasses import dataclass, field

from .codec import ByteReader, ByteWriter, HASH_LEN
from .contract import (
    ExecutionReceipt,
    GasSchedule,
    LedgerState,
    apply_action,
    compute_state_root,
)
from .errors import ContractError, SubmitError
from .tx import SignedTransaction, decode_transaction, verify_transaction

MAX_BLOCK_TXS = 100
ZERO_HASH = b"\x00" * HASH_LEN

# Treasury minted to the producer at genesis; the faucet hands it out via
# ordinary signed transfers so total supply stays constant and replayable.
GENESIS_ALLOCATION_WEI = 10**30
GENESIS_TIMESTAMP = 0
GENESIS_DEPLOY_TX_HASH = hashlib.sha256(b"pchain/genesis/deploy").digest()


@dataclass(frozen=True)
class ChainParams:
    """Everything genesis and replay depend on besides the blocks themselves."""

    producer: bytes
    schedule: GasSchedule = GasSchedule()
    allocation_wei: int = GENESIS_ALLOCATION_WEI


@dataclass(frozen=True)
class Block:
    height: int
    prev_hash: bytes
    timestamp: int
    transactions: tuple[SignedTransaction, ...]
    receipts: tuple[ExecutionReceipt, ...]
    state_root: bytes
    block_hash: bytes

    def encode(self) -> bytes:
        w = ByteWriter()
        w.u64(self.height)
        w.fixed(self.prev_hash, HASH_LEN)
        w.u64(self.timestamp)
        w.fixed(self.state_root, HASH_LEN)
        w.fixed(self.block_hash, HASH_LEN)
        w.u64(len(self.transactions))
        for tx in self.transactions:
            w.raw(tx.wire_bytes())
        w.u64(len(self.receipts))
        for receipt in self.receipts:
            receipt.encode(w)
        return w.getvalue()

    @classmethod
    def decode(cls, data: bytes) -> "Block":
        r = ByteReader(data)
        height = r.u64()
        prev_hash = r.fixed(HASH_LEN)
        timestamp = r.u64()
        state_root = r.fixed(HASH_LEN)
        block_hash = r.fixed(HASH_LEN)
        transactions = tuple(decode_transaction(r) for _ in range(r.u64()))
        receipts = tuple(ExecutionReceipt.decode(r) for _ in range(r.u64()))
        r.expect_end()
        return cls(
            height=height, prev_hash=prev_hash, timestamp=timestamp,
            transactions=transactions, receipts=receipts,
            state_root=state_root, block_hash=block_hash,
        )


def transaction_list_hash(transactions: tuple[SignedTransaction, ...]) -> bytes:
    h = hashlib.sha256()
    for tx in transactions:
        h.update(tx.wire_bytes())
    return h.digest()


def block_header_hash(
    height: int, prev_hash: bytes, timestamp: int, tx_list_hash: bytes, state_root: bytes
) -> bytes:
    w = ByteWriter()
    w.u64(height)
    w.fixed(prev_hash, HASH_LEN)
    w.u64(timestamp)
    w.fixed(tx_list_hash, HASH_LEN)
    w.fixed(state_root, HASH_LEN)
    return hashlib.sha256(w.getvalue()).digest()


def build_genesis(params: ChainParams) -> tuple[Block, LedgerState]:
    state = LedgerState()
    if params.allocation_wei:
        state.credit(params.producer, params.allocation_wei)
    state_root = compute_state_root(state)
    schedule = params.schedule
    deploy_receipt = ExecutionReceipt(
        tx_hash=GENESIS_DEPLOY_TX_HASH,
        success=True,
        gas_used=schedule.deploy_system,
        fee_wei=schedule.deploy_system * schedule.gas_price_wei,
    )
    block_hash = block_header_hash(0, ZERO_HASH, GENESIS_TIMESTAMP, transaction_list_hash(()), state_root)
    block = Block(
        height=0, prev_hash=ZERO_HASH, timestamp=GENESIS_TIMESTAMP,
        transactions=(), receipts=(deploy_receipt,),
        state_root=state_root, block_hash=block_hash,
    )
    return block, state


class Mempool:
    """FIFO queue of signature-checked transactions awaiting a block."""

    def __init__(self) -> None:
        self._queue: list[SignedTransaction] = []
        self._pending_per_sender: dict[bytes, int] = {}

    def __len__(self) -> int:
        return len(self._queue)

    def pending_count(self, sender: bytes) -> int:
        return self._pending_per_sender.get(sender, 0)

    def add(self, tx: SignedTransaction) -> None:
        self._queue.append(tx)
        self._pending_per_sender[tx.sender] = self.pending_count(tx.sender) + 1

    def drain(self, limit: int) -> list[SignedTransaction]:
        taken, self._queue = self._queue[:limit], self._queue[limit:]
        for tx in taken:
            remaining = self.pending_count(tx.sender) - 1
            if remaining:
                self._pending_per_sender[tx.sender] = remaining
            else:
                self._pending_per_sender.pop(tx.sender, None)
        return taken


class ChainStore:
    """Blocks plus the latest committed state; replaying blocks reproduces it."""

    def __init__(self, params: ChainParams):
        self.params = params
        self.blocks: list[Block] = []
        self.state = LedgerState()
        self.receipt_locations: dict[bytes, tuple[int, int]] = {}

    @classmethod
    def create(cls, params: ChainParams) -> "ChainStore":
        store = cls(params)
        block, state = build_genesis(params)
        store._commit(block, state)
        return store

    @property
    def head(self) -> Block:
        return self.blocks[-1]

    def block_at(self, height: int) -> Block | None:
        if 0 <= height < len(self.blocks):
            return self.blocks[height]
        return None

    def receipt(self, tx_hash: bytes) -> tuple[ExecutionReceipt, int] | None:
        loc = self.receipt_locations.get(tx_hash)
        if loc is None:
            return None
        height, index = loc
        return self.blocks[height].receipts[index], height

    def _commit(self, block: Block, state: LedgerState) -> None:
        self.blocks.append(block)
        self.state = state
        for index, receipt in enumerate(block.receipts):
            self.receipt_locations[receipt.tx_hash] = (block.height, index)


def submit(store: ChainStore, mempool: Mempool, tx: SignedTransaction) -> bytes:
    """Admit a transaction to the mempool or raise SubmitError."""
    if not verify_transaction(tx):
        raise SubmitError("BadSignature", "signature does not verify for the sender address")
    expected = store.state.nonce(tx.sender) + mempool.pending_count(tx.sender)
    if tx.nonce != expected:
        raise SubmitError("NonceGap", f"expected nonce {expected}, got {tx.nonce}")
    fee = store.params.schedule.fee_for_action(tx.action)
    if store.state.balance(tx.sender) < tx.value_wei + fee:
        raise SubmitError("InsufficientBalance", "balance does not cover value plus max fee")
    mempool.add(tx)
    return tx.tx_hash


class NotIncludable(Exception):
    """Transaction cannot legally appear in a block at this point."""

    def __init__(self, code: str, message: str = ""):
        super().__init__(message or code)
        self.code = code


def execute_transaction(
    state: LedgerState, tx: SignedTransaction, producer: bytes, schedule: GasSchedule
) -> ExecutionReceipt:
    """Charge gas, advance the nonce, run the action; failures become receipts.

    Raises NotIncludable when the transaction may not enter a block at all
    (bad signature, nonce mismatch, or fee not payable).
    """
    if not verify_transaction(tx):
        raise NotIncludable("BadSignature")
    if tx.nonce != state.nonce(tx.sender):
        raise NotIncludable("NonceGap")
    gas = schedule.gas_for_action(tx.action)
    fee = gas * schedule.gas_price_wei
    if state.balance(tx.sender) < fee:
        raise NotIncludable("FeeUnpayable")

    state.debit(tx.sender, fee)
    state.credit(producer, fee)
    state.nonces[tx.sender] = tx.nonce + 1

    tx_hash = tx.tx_hash
    if state.balance(tx.sender) < tx.value_wei:
        return ExecutionReceipt(
            tx_hash=tx_hash, success=False, gas_used=gas, fee_wei=fee, error="InsufficientBalance",
        )
    state.debit(tx.sender, tx.value_wei)
    try:
        company, product_id = apply_action(state, tx.sender, tx.nonce, tx.action, tx.value_wei)
    except ContractError as exc:
        state.credit(tx.sender, tx.value_wei)  # refund attached value, keep the fee
        return ExecutionReceipt(
            tx_hash=tx_hash, success=False, gas_used=gas, fee_wei=fee, error=exc.code,
        )
    return ExecutionReceipt(
        tx_hash=tx_hash, success=True, gas_used=gas, fee_wei=fee,
        company=company, product_id=product_id,
    )


def produce_block(
    store: ChainStore, mempool: Mempool, *, timestamp: int | None = None, max_txs: int = MAX_BLOCK_TXS
) -> Block:
    """Drain the mempool in FIFO order into the next block and commit it."""
    drained = mempool.drain(max_txs)
    state = store.state.clone()
    producer = store.params.producer
    schedule = store.params.schedule
    included: list[SignedTransaction] = []
    receipts: list[ExecutionReceipt] = []
    for tx in drained:
        try:
            receipt = execute_transaction(state, tx, producer, schedule)
        except NotIncludable:
            continue  # stale by the time of production; silently dropped
        included.append(tx)
        receipts.append(receipt)

    head = store.head
    height = head.height + 1
    ts = int(time.time()) if timestamp is None else timestamp
    state_root = compute_state_root(state)
    transactions = tuple(included)
    block_hash = block_header_hash(height, head.block_hash, ts, transaction_list_hash(transactions), state_root)
    block = Block(
        height=height, prev_hash=head.block_hash, timestamp=ts,
        transactions=transactions, receipts=tuple(receipts),
        state_root=state_root, block_hash=block_hash,
    )
    store._commit(block, state)
    return block


class BlockInvalid(Exception):
    def __init__(self, height: int, reason: str):
        super().__init__(f"block {height}: {reason}")
        self.height = height
        self.reason = reason


def verify_and_apply(store: ChainStore, block: Block) -> None:
    """Recompute everything about `block` against `store` and commit it.

    Raises BlockInvalid on the first disagreement between stored data and
    recomputation (hashes, links, signatures, receipts, state root).
    """
    height = len(store.blocks)
    if block.height != height:
        raise BlockInvalid(height, f"height {block.height}, expected {height}")

    if height == 0:
        genesis, state = build_genesis(store.params)
        if block.encode() != genesis.encode():
            raise BlockInvalid(0, "genesis block does not match chain parameters")
        store._commit(block, state)
        return

    prev = store.blocks[-1]
    if block.prev_hash != prev.block_hash:
        raise BlockInvalid(height, "prev_hash does not match parent block hash")
    recomputed_hash = block_header_hash(
        block.height, block.prev_hash, block.timestamp,
        transaction_list_hash(block.transactions), block.state_root,
    )
    if recomputed_hash != block.block_hash:
        raise BlockInvalid(height, "block hash mismatch")

    state = store.state.clone()
    recomputed: list[ExecutionReceipt] = []
    for tx in block.transactions:
        try:
            recomputed.append(execute_transaction(state, tx, store.params.producer, store.params.schedule))
        except NotIncludable as exc:
            raise BlockInvalid(height, f"transaction not executable: {exc.code}")
    if tuple(recomputed) != block.receipts:
        raise BlockInvalid(height, "receipts do not match re-execution")
    if compute_state_root(state) != block.state_root:
        raise BlockInvalid(height, "state root does not match re-execution")
    store._commit(block, state)


@dataclass(frozen=True)
class ValidationResult:
    ok: bool
    height: int | None = None
    reason: str | None = None


def validate_chain(store: ChainStore) -> ValidationResult:
    """Replay every block from genesis and compare against stored data."""
    fresh = ChainStore(store.params)
    for block in store.blocks:
        try:
            verify_and_apply(fresh, block)
        except BlockInvalid as exc:
            return ValidationResult(ok=False, height=exc.height, reason=exc.reason)
    head_height = len(store.blocks) - 1
    if compute_state_root(store.state) != compute_state_root(fresh.state):
        return ValidationResult(ok=False, height=head_height, reason="live state diverges from replay")
    live_nonces = {k: v for k, v in store.state.nonces.items() if v}
    fresh_nonces = {k: v for k, v in fresh.state.nonces.items() if v}
    if live_nonces != fresh_nonces:
        return ValidationResult(ok=False, height=head_height, reason="account nonces diverge from replay")
    return ValidationResult(ok=True)
