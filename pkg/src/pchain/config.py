"""Node configuration.

Flat ``key=value`` text file; blank lines and ``#`` comments allowed.
``PCHAIN_CONFIG`` points at the file, ``PCHAIN_LISTEN`` overrides the port.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from decimal import Decimal, InvalidOperation
from pathlib import Path

from .costs import DEFAULT_ETH_USD_RATE
from .errors import ChainError

ENV_CONFIG = "PCHAIN_CONFIG"
ENV_LISTEN = "PCHAIN_LISTEN"

DEFAULT_LISTEN_HOST = "127.0.0.1"
DEFAULT_LISTEN_PORT = 8545
DEFAULT_LOG_PATH = "pchain.blocklog"
DEFAULT_GAS_PRICE_WEI = 10**9


class ConfigError(ChainError):
    pass


@dataclass(frozen=True)
class NodeConfig:
    listen_host: str = DEFAULT_LISTEN_HOST
    listen_port: int = DEFAULT_LISTEN_PORT
    block_log_path: str = DEFAULT_LOG_PATH
    producer_seed: bytes = field(default=b"\x00" * 32, repr=False)
    gas_price_wei: int = DEFAULT_GAS_PRICE_WEI
    eth_usd_rate: Decimal = DEFAULT_ETH_USD_RATE
    block_interval_seconds: float = 0.0
    faucet_enabled: bool = True

    def __post_init__(self) -> None:
        if self.gas_price_wei < 1:
            raise ConfigError("ConfigInvalid", "gas_price_wei must be >= 1")
        if self.eth_usd_rate <= 0:
            raise ConfigError("ConfigInvalid", "eth_usd_rate must be positive")
        if len(self.producer_seed) != 32:
            raise ConfigError("ConfigInvalid", "producer_seed must be 32 bytes")
        if not (0 < self.listen_port < 65536):
            raise ConfigError("ConfigInvalid", "listen_port out of range")
        if self.block_interval_seconds < 0:
            raise ConfigError("ConfigInvalid", "block_interval_seconds must be >= 0")


def _parse_bool(raw: str, key: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ConfigError("ConfigInvalid", f"{key}: expected a boolean, got {raw!r}")


def parse_config(text: str) -> NodeConfig:
    values: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError("ConfigInvalid", f"line {lineno}: expected key=value")
        key, _, value = stripped.partition("=")
        values[key.strip()] = value.strip()

    cfg = NodeConfig()
    try:
        if "listen_host" in values:
            cfg = replace(cfg, listen_host=values["listen_host"])
        if "listen_port" in values:
            cfg = replace(cfg, listen_port=int(values["listen_port"]))
        if "block_log_path" in values:
            cfg = replace(cfg, block_log_path=values["block_log_path"])
        if "producer_seed" in values:
            seed = bytes.fromhex(values["producer_seed"].removeprefix("0x"))
            cfg = replace(cfg, producer_seed=seed)
        if "gas_price_wei" in values:
            cfg = replace(cfg, gas_price_wei=int(values["gas_price_wei"]))
        if "eth_usd_rate" in values:
            cfg = replace(cfg, eth_usd_rate=Decimal(values["eth_usd_rate"]))
        if "block_interval_seconds" in values:
            cfg = replace(cfg, block_interval_seconds=float(values["block_interval_seconds"]))
        if "faucet_enabled" in values:
            cfg = replace(cfg, faucet_enabled=_parse_bool(values["faucet_enabled"], "faucet_enabled"))
    except (ValueError, InvalidOperation) as exc:
        raise ConfigError("ConfigInvalid", str(exc)) from exc

    known = {
        "listen_host", "listen_port", "block_log_path", "producer_seed",
        "gas_price_wei", "eth_usd_rate", "block_interval_seconds", "faucet_enabled",
    }
    unknown = set(values) - known
    if unknown:
        raise ConfigError("ConfigInvalid", f"unknown keys: {', '.join(sorted(unknown))}")
    return cfg


def load_config(path: str | os.PathLike[str] | None = None, env: dict[str, str] | None = None) -> NodeConfig:
    """Load config from ``path``, ``PCHAIN_CONFIG``, or defaults, then apply env overrides."""
    environ = os.environ if env is None else env
    if path is None:
        path = environ.get(ENV_CONFIG)
    cfg = parse_config(Path(path).read_text(encoding="utf-8")) if path else NodeConfig()

    listen = environ.get(ENV_LISTEN)
    if listen:
        try:
            cfg = replace(cfg, listen_port=int(listen))
        except ValueError as exc:
            raise ConfigError("ConfigInvalid", f"{ENV_LISTEN}: expected a port number") from exc
    return cfg
