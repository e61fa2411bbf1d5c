"""Node runtime: one chain store, one mempool, one append-only block log.

All mutation funnels through a single lock so concurrent HTTP handlers cannot
interleave submit/produce; every produced block is fsynced to the log before
the call returns, so a crash after any commit restarts to the same head.
"""

from __future__ import annotations

import threading
from dataclasses import replace
from pathlib import Path

from .blocklog import HEADER_LEN, BlockLog, load_store
from .chain import (
    Block,
    ChainParams,
    ChainStore,
    Mempool,
    ValidationResult,
    produce_block,
    submit,
    validate_chain,
)
from .config import NodeConfig
from .contract import Company, ExecutionReceipt, GasSchedule, Product
from .costs import CostReport, build_cost_report
from .errors import SubmitError
from .keys import generate_keypair
from .qr import QRPayload, Verdict, decode_text, encode_text, issue_payload, verify_payload
from .tx import SignedTransaction, Transfer, sign_transaction


class Node:
    def __init__(self, config: NodeConfig):
        self.config = config
        self.producer = generate_keypair(config.producer_seed)
        schedule = replace(GasSchedule(), gas_price_wei=config.gas_price_wei)
        params = ChainParams(producer=self.producer.address, schedule=schedule)

        path = Path(config.block_log_path)
        if path.exists() and path.stat().st_size > HEADER_LEN:
            self.store = load_store(path, params)
            self.log = BlockLog(path)
        else:
            self.store = ChainStore.create(params)
            self.log = BlockLog(path)
            self.log.append(self.store.head)

        self.mempool = Mempool()
        self._lock = threading.RLock()
        self._stop = threading.Event()
        self._producer_thread: threading.Thread | None = None
        if config.block_interval_seconds > 0:
            self._producer_thread = threading.Thread(target=self._interval_loop, daemon=True)
            self._producer_thread.start()

    # -- mutation ---------------------------------------------------------

    def submit(self, tx: SignedTransaction) -> bytes:
        with self._lock:
            return submit(self.store, self.mempool, tx)

    def produce(self, *, timestamp: int | None = None) -> Block:
        with self._lock:
            block = produce_block(self.store, self.mempool, timestamp=timestamp)
            self.log.append(block)
            return block

    def faucet(self, address: bytes, amount_wei: int) -> bytes:
        """Transfer from the producer treasury, signed server-side."""
        if not self.config.faucet_enabled:
            raise SubmitError("FaucetDisabled", "the faucet is disabled on this node")
        with self._lock:
            nonce = self.store.state.nonce(self.producer.address) + self.mempool.pending_count(
                self.producer.address
            )
            tx = SignedTransaction(
                sender=self.producer.address, nonce=nonce,
                action=Transfer(to=address), value_wei=amount_wei,
            )
            return self.submit(sign_transaction(tx, self.producer))

    def _interval_loop(self) -> None:
        while not self._stop.wait(self.config.block_interval_seconds):
            with self._lock:
                if len(self.mempool):
                    block = produce_block(self.store, self.mempool)
                    self.log.append(block)

    def close(self) -> None:
        self._stop.set()
        if self._producer_thread is not None:
            self._producer_thread.join(timeout=5)
        self.log.close()

    # -- queries ----------------------------------------------------------

    @property
    def head(self) -> Block:
        return self.store.head

    def block_at(self, height: int) -> Block | None:
        return self.store.block_at(height)

    def receipt(self, tx_hash: bytes) -> tuple[ExecutionReceipt, int] | None:
        return self.store.receipt(tx_hash)

    def companies(self) -> list[Company]:
        return list(self.store.state.companies)

    def company(self, address: bytes) -> Company | None:
        return self.store.state.company(address)

    def product(self, company: bytes, product_id: int) -> Product | None:
        found = self.store.state.company(company)
        if found is None:
            return None
        return found.product(product_id)

    def balance(self, address: bytes) -> int:
        return self.store.state.balance(address)

    def nonce(self, address: bytes) -> int:
        with self._lock:
            return self.store.state.nonce(address) + self.mempool.pending_count(address)

    def qr_payload(self, company: bytes, product_id: int) -> str:
        with self._lock:
            payload = issue_payload(self.store.state, company, product_id, self.head.height)
        return encode_text(payload)

    def verify_qr(self, text: str) -> tuple[QRPayload, Verdict]:
        payload = decode_text(text)
        with self._lock:
            return payload, verify_payload(payload, self.store.state)

    def cost_report(self) -> CostReport:
        return build_cost_report(self.store.params.schedule, self.config.eth_usd_rate)

    def validate(self) -> ValidationResult:
        with self._lock:
            return validate_chain(self.store)
