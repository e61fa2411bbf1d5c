"""Error types with stable, wire-visible codes.

Every rejection the node or the contract machine can produce carries one of
the string codes below; the HTTP API and the CLI surface them verbatim.
"""

from __future__ import annotations


class ChainError(Exception):
    """Base error carrying a machine-readable code."""

    def __init__(self, code: str, message: str = ""):
        super().__init__(message or code)
        self.code = code
        self.message = message or code


class CodecError(ChainError):
    """Canonical encoding or decoding failed (includes FieldTooLong)."""


class SubmitError(ChainError):
    """Transaction rejected at the mempool: BadSignature, NonceGap, InsufficientBalance."""


class ContractError(ChainError):
    """Contract guard fired; becomes a failure receipt when raised inside a block."""


class QRError(ChainError):
    """QR payload text could not be decoded: BadPrefix, BadBase64, ChecksumMismatch, UnsupportedVersion."""


class CorruptLogError(ChainError):
    """Persisted block log failed framing, decoding, or re-validation."""

    def __init__(self, height: int, message: str = ""):
        super().__init__("CorruptLog", message or f"corrupt block log at height {height}")
        self.height = height


class TransportError(Exception):
    """Client could not reach the node at all (network-level failure)."""
