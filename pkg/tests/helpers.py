"""Shared scaffolding for chain-level tests: funded stores and quick tx plumbing."""

from __future__ import annotations

from dataclasses import replace

from pchain.chain import ChainParams, ChainStore, Mempool, produce_block, submit
from pchain.contract import GasSchedule
from pchain.keys import KeyPair, generate_keypair
from pchain.tx import Action, SignedTransaction, Transfer, sign_transaction

PRODUCER_SEED = b"\x09" * 32
GWEI = 10**9
ETH = 10**18


def new_chain(gas_price_wei: int = GWEI) -> tuple[ChainStore, Mempool, KeyPair]:
    """Fresh store with genesis committed; returns (store, mempool, producer key)."""
    producer = generate_keypair(PRODUCER_SEED)
    params = ChainParams(
        producer=producer.address,
        schedule=replace(GasSchedule(), gas_price_wei=gas_price_wei),
    )
    return ChainStore.create(params), Mempool(), producer


def next_nonce(store: ChainStore, mempool: Mempool, key: KeyPair) -> int:
    return store.state.nonce(key.address) + mempool.pending_count(key.address)


def send(store: ChainStore, mempool: Mempool, key: KeyPair, action: Action, value_wei: int = 0) -> SignedTransaction:
    """Sign with the next nonce and submit; returns the signed transaction."""
    tx = SignedTransaction(
        sender=key.address, nonce=next_nonce(store, mempool, key), action=action, value_wei=value_wei
    )
    tx = sign_transaction(tx, key)
    submit(store, mempool, tx)
    return tx


def fund(store: ChainStore, mempool: Mempool, producer: KeyPair, address: bytes, wei: int) -> None:
    """Move wei from the genesis treasury to `address` and mine it."""
    send(store, mempool, producer, Transfer(to=address), wei)
    produce_block(store, mempool, timestamp=store.head.timestamp + 1)


def funded_keys(store: ChainStore, mempool: Mempool, producer: KeyPair, seeds: list[bytes], wei: int = 10 * ETH):
    keys = [generate_keypair(seed) for seed in seeds]
    for key in keys:
        send(store, mempool, producer, Transfer(to=key.address), wei)
    produce_block(store, mempool, timestamp=store.head.timestamp + 1)
    return keys
