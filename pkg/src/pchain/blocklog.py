"""Append-only block log persistence.

File layout: magic "PCHN", one version byte 0x01, then one record per block:
4-byte big-endian length followed by the canonical block bytes. Loading
replays and re-validates every record; anything that fails framing, decoding,
or validation raises CorruptLog with the offending height.
"""

from __future__ import annotations

import os
from pathlib import Path

from .chain import Block, BlockInvalid, ChainParams, ChainStore, verify_and_apply
from .errors import ChainError, CorruptLogError

MAGIC = b"PCHN"
FORMAT_VERSION = 1
_HEADER = MAGIC + bytes([FORMAT_VERSION])
HEADER_LEN = len(_HEADER)


def _encode_record(block: Block) -> bytes:
    payload = block.encode()
    return len(payload).to_bytes(4, "big") + payload


def read_blocks(path: str | Path) -> list[Block]:
    data = Path(path).read_bytes()
    if data[: len(_HEADER)] != _HEADER:
        raise CorruptLogError(0, "bad magic or unsupported format version")
    pos = len(_HEADER)
    blocks: list[Block] = []
    while pos < len(data):
        height = len(blocks)
        if pos + 4 > len(data):
            raise CorruptLogError(height, "truncated record length")
        length = int.from_bytes(data[pos : pos + 4], "big")
        pos += 4
        if pos + length > len(data):
            raise CorruptLogError(height, "truncated record payload")
        try:
            blocks.append(Block.decode(data[pos : pos + length]))
        except ChainError as exc:
            raise CorruptLogError(height, f"undecodable block: {exc.code}") from exc
        pos += length
    return blocks


def load_store(path: str | Path, params: ChainParams) -> ChainStore:
    """Rebuild and fully validate a ChainStore from a block log."""
    blocks = read_blocks(path)
    if not blocks:
        raise CorruptLogError(0, "log contains no blocks")
    store = ChainStore(params)
    for block in blocks:
        try:
            verify_and_apply(store, block)
        except BlockInvalid as exc:
            raise CorruptLogError(exc.height, exc.reason) from exc
    return store


def persist_store(store: ChainStore, path: str | Path) -> None:
    """Write the full log atomically (temp file + rename)."""
    path = Path(path)
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "wb") as fh:
        fh.write(_HEADER)
        for block in store.blocks:
            fh.write(_encode_record(block))
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, path)


class BlockLog:
    """Open append handle used by the running node; fsyncs every record."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        fresh = not self.path.exists() or self.path.stat().st_size == 0
        self._fh = open(self.path, "ab")
        if fresh:
            self._fh.write(_HEADER)
            self._flush()

    def append(self, block: Block) -> None:
        self._fh.write(_encode_record(block))
        self._flush()

    def _flush(self) -> None:
        self._fh.flush()
        os.fsync(self._fh.fileno())

    def close(self) -> None:
        if not self._fh.closed:
            self._fh.close()
