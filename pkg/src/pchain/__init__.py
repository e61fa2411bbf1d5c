"""Permissioned supply-chain ledger with QR provenance verification."""

__version__ = "0.1.0"

from .chain import Block, ChainParams, ChainStore, Mempool, produce_block, submit, validate_chain
from .contract import GasSchedule, LedgerState, compute_state_root
from .errors import ChainError, CodecError, ContractError, CorruptLogError, QRError, SubmitError
from .keys import KeyPair, generate_keypair
from .tx import SignedTransaction, sign_transaction, verify_transaction

__all__ = [
    "Block",
    "ChainError",
    "ChainParams",
    "ChainStore",
    "CodecError",
    "ContractError",
    "CorruptLogError",
    "GasSchedule",
    "KeyPair",
    "LedgerState",
    "Mempool",
    "QRError",
    "SignedTransaction",
    "SubmitError",
    "compute_state_root",
    "generate_keypair",
    "produce_block",
    "sign_transaction",
    "submit",
    "validate_chain",
    "verify_transaction",
]
