"""Thin HTTP client for the node API.

Mirrors the endpoint surface one-to-one and returns parsed JSON bodies.
Error envelopes become ApiError (code surfaced verbatim); network-level
failures become TransportError.
"""

from __future__ import annotations

import os
from typing import Any

import httpx

from .errors import TransportError
from .service.schemas import action_to_model, to_hex
from .tx import SignedTransaction

ENV_NODE_URL = "PCHAIN_NODE_URL"
DEFAULT_NODE_URL = "http://127.0.0.1:8545"


class ApiError(Exception):
    """The node answered with an error envelope."""

    def __init__(self, status: int, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.status = status
        self.code = code
        self.message = message


def default_node_url() -> str:
    return os.environ.get(ENV_NODE_URL, DEFAULT_NODE_URL)


class NodeClient:
    def __init__(self, base_url: str | None = None, timeout: float = 10.0):
        self.base_url = (base_url or default_node_url()).rstrip("/")
        self._http = httpx.Client(base_url=self.base_url, timeout=timeout)

    def close(self) -> None:
        self._http.close()

    def __enter__(self) -> "NodeClient":
        return self

    def __exit__(self, *exc: object) -> None:
        self.close()

    def _request(self, method: str, path: str, json: Any | None = None) -> Any:
        try:
            response = self._http.request(method, path, json=json)
        except httpx.HTTPError as exc:
            raise TransportError(f"cannot reach node at {self.base_url}: {exc}") from exc
        if response.status_code >= 400:
            try:
                detail = response.json()["error"]
                raise ApiError(response.status_code, detail["code"], detail.get("message", ""))
            except (ValueError, KeyError, TypeError):
                raise ApiError(response.status_code, "HTTPError", response.text[:200])
        return response.json()

    # -- transactions -------------------------------------------------------

    def submit(self, tx: SignedTransaction) -> str:
        if tx.public_key is None or tx.signature is None:
            raise ValueError("transaction must be signed before submission")
        body = {
            "sender": to_hex(tx.sender),
            "nonce": tx.nonce,
            "action": action_to_model(tx.action),
            "value_wei": str(tx.value_wei),
            "public_key": to_hex(tx.public_key),
            "signature": to_hex(tx.signature),
        }
        return self._request("POST", "/v1/tx", json=body)["tx_hash"]

    def produce(self) -> dict:
        return self._request("POST", "/v1/blocks/produce")

    def faucet(self, address_hex: str, amount_wei: int) -> str:
        body = {"address": address_hex, "amount_wei": str(amount_wei)}
        return self._request("POST", "/v1/faucet", json=body)["tx_hash"]

    # -- queries --------------------------------------------------------------

    def head(self) -> dict:
        return self._request("GET", "/v1/chain/head")

    def validate(self) -> dict:
        return self._request("GET", "/v1/chain/validate")

    def block(self, height: int) -> dict:
        return self._request("GET", f"/v1/blocks/{height}")

    def receipt(self, tx_hash_hex: str) -> dict:
        return self._request("GET", f"/v1/receipts/{tx_hash_hex}")

    def account(self, address_hex: str) -> dict:
        return self._request("GET", f"/v1/accounts/{address_hex}")

    def companies(self) -> list[dict]:
        return self._request("GET", "/v1/companies")

    def company(self, address_hex: str) -> dict:
        return self._request("GET", f"/v1/companies/{address_hex}")

    def product(self, address_hex: str, product_id: int) -> dict:
        return self._request("GET", f"/v1/companies/{address_hex}/products/{product_id}")

    def qr_payload(self, address_hex: str, product_id: int) -> str:
        return self._request("GET", f"/v1/companies/{address_hex}/products/{product_id}/qr")["payload"]

    def verify_qr(self, payload: str) -> dict:
        return self._request("POST", "/v1/qr/verify", json={"payload": payload})

    def costs(self) -> dict:
        return self._request("GET", "/v1/costs")

    def gas_schedule(self) -> dict:
        return self._request("GET", "/v1/gas-schedule")
