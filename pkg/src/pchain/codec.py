"""Canonical byte encoding shared by transactions, blocks, state roots, and QR payloads.

Integers are big-endian fixed width, strings are u16-length-prefixed UTF-8
capped at 256 bytes, addresses are raw 20-byte values. Encoding is
byte-identical across platforms. Decoding is strict: it rejects out-of-range
values, bad UTF-8, and trailing bytes, so a decoder never accepts bytes the
encoder could not have produced.
"""

from __future__ import annotations

from .errors import CodecError

ADDRESS_LEN = 20
HASH_LEN = 32
PUBKEY_LEN = 32
SIGNATURE_LEN = 64
MAX_STRING_BYTES = 256

U64_MAX = 2**64 - 1
U128_MAX = 2**128 - 1


class ByteWriter:
    """Append-only canonical encoder."""

    def __init__(self) -> None:
        self._buf = bytearray()

    def u8(self, value: int) -> None:
        if not 0 <= value <= 0xFF:
            raise CodecError("ValueOutOfRange", f"u8 out of range: {value}")
        self._buf.append(value)

    def u32(self, value: int) -> None:
        if not 0 <= value <= 0xFFFFFFFF:
            raise CodecError("ValueOutOfRange", f"u32 out of range: {value}")
        self._buf += value.to_bytes(4, "big")

    def u64(self, value: int) -> None:
        if not 0 <= value <= U64_MAX:
            raise CodecError("ValueOutOfRange", f"u64 out of range: {value}")
        self._buf += value.to_bytes(8, "big")

    def u128(self, value: int) -> None:
        if not 0 <= value <= U128_MAX:
            raise CodecError("ValueOutOfRange", f"u128 out of range: {value}")
        self._buf += value.to_bytes(16, "big")

    def fixed(self, value: bytes, length: int) -> None:
        if len(value) != length:
            raise CodecError("ValueOutOfRange", f"expected {length} bytes, got {len(value)}")
        self._buf += value

    def address(self, value: bytes) -> None:
        self.fixed(value, ADDRESS_LEN)

    def string(self, value: str) -> None:
        raw = value.encode("utf-8")
        if len(raw) > MAX_STRING_BYTES:
            raise CodecError("FieldTooLong", f"string field is {len(raw)} bytes, max {MAX_STRING_BYTES}")
        self._buf += len(raw).to_bytes(2, "big")
        self._buf += raw

    def raw(self, value: bytes) -> None:
        self._buf += value

    def getvalue(self) -> bytes:
        return bytes(self._buf)


class ByteReader:
    """Strict decoder over a byte string; raises CodecError on any malformation."""

    def __init__(self, data: bytes) -> None:
        self._data = data
        self._pos = 0

    def _take(self, n: int) -> bytes:
        if self._pos + n > len(self._data):
            raise CodecError("Truncated", f"needed {n} bytes at offset {self._pos}")
        out = self._data[self._pos : self._pos + n]
        self._pos += n
        return out

    def u8(self) -> int:
        return self._take(1)[0]

    def u32(self) -> int:
        return int.from_bytes(self._take(4), "big")

    def u64(self) -> int:
        return int.from_bytes(self._take(8), "big")

    def u128(self) -> int:
        return int.from_bytes(self._take(16), "big")

    def fixed(self, length: int) -> bytes:
        return self._take(length)

    def address(self) -> bytes:
        return self._take(ADDRESS_LEN)

    def string(self) -> str:
        length = int.from_bytes(self._take(2), "big")
        if length > MAX_STRING_BYTES:
            raise CodecError("FieldTooLong", f"string length prefix {length} exceeds {MAX_STRING_BYTES}")
        raw = self._take(length)
        try:
            return raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise CodecError("BadUtf8", str(exc)) from exc

    @property
    def remaining(self) -> int:
        return len(self._data) - self._pos

    def expect_end(self) -> None:
        if self.remaining:
            raise CodecError("TrailingBytes", f"{self.remaining} unexpected trailing bytes")
