"""FastAPI application exposing the node over HTTP/JSON.

All errors share one envelope: {"error": {"code", "message"}}. Submit-level
rejections are 400 (403 for a disabled faucet), missing resources are 404
with code NotFound, and malformed bodies are 422 with code BadRequest.
"""

from __future__ import annotations

import argparse
import sys
from contextlib import asynccontextmanager

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from starlette.exceptions import HTTPException as StarletteHTTPException

from ..config import load_config
from ..errors import ChainError, SubmitError
from ..node import Node
from . import schemas
from .schemas import from_hex, to_hex


class NotFound(Exception):
    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


def _error_json(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": {"code": code, "message": message}})


def create_app(node: Node) -> FastAPI:
    @asynccontextmanager
    async def lifespan(app: FastAPI):
        yield
        node.close()

    app = FastAPI(title="pchain node", lifespan=lifespan)
    app.state.node = node

    @app.exception_handler(SubmitError)
    async def submit_error(request: Request, exc: SubmitError):
        status = 403 if exc.code == "FaucetDisabled" else 400
        return _error_json(status, exc.code, exc.message)

    @app.exception_handler(ChainError)
    async def chain_error(request: Request, exc: ChainError):
        return _error_json(400, exc.code, exc.message)

    @app.exception_handler(NotFound)
    async def not_found(request: Request, exc: NotFound):
        return _error_json(404, "NotFound", exc.message)

    @app.exception_handler(RequestValidationError)
    async def validation_error(request: Request, exc: RequestValidationError):
        return _error_json(422, "BadRequest", str(exc.errors()[:3]))

    @app.exception_handler(StarletteHTTPException)
    async def http_error(request: Request, exc: StarletteHTTPException):
        return _error_json(exc.status_code, "NotFound" if exc.status_code == 404 else "HTTPError", str(exc.detail))

    # -- transactions and blocks -------------------------------------------

    @app.post("/v1/tx", status_code=202, response_model=schemas.TxAccepted)
    def submit_tx(body: schemas.TxSubmitRequest):
        tx_hash = node.submit(body.to_transaction())
        return schemas.TxAccepted(tx_hash=to_hex(tx_hash))

    @app.post("/v1/blocks/produce", response_model=schemas.BlockSummary)
    def produce_block():
        return schemas.block_summary(node.produce())

    @app.get("/v1/chain/head", response_model=schemas.BlockSummary)
    def chain_head():
        return schemas.block_summary(node.head)

    @app.get("/v1/chain/validate", response_model=schemas.ValidationModel)
    def chain_validate():
        result = node.validate()
        return schemas.ValidationModel(ok=result.ok, height=result.height, reason=result.reason)

    @app.get("/v1/blocks/{height}", response_model=schemas.BlockDetail)
    def block_at(height: int):
        block = node.block_at(height)
        if block is None:
            raise NotFound(f"no block at height {height}")
        return schemas.block_detail(block)

    @app.get("/v1/receipts/{tx_hash}", response_model=schemas.ReceiptModel)
    def receipt(tx_hash: str):
        found = node.receipt(from_hex(tx_hash, 32, "tx_hash"))
        if found is None:
            raise NotFound("no receipt for that transaction hash")
        return schemas.receipt_model(found[0], found[1])

    # -- contract state ------------------------------------------------------

    @app.get("/v1/companies", response_model=list[schemas.CompanyModel])
    def companies():
        return [schemas.company_model(c) for c in node.companies()]

    @app.get("/v1/companies/{addr}", response_model=schemas.CompanyModel)
    def company(addr: str):
        found = node.company(from_hex(addr, 20, "company address"))
        if found is None:
            raise NotFound("no company at that address")
        return schemas.company_model(found)

    @app.get("/v1/companies/{addr}/products/{product_id}", response_model=schemas.ProductModel)
    def product(addr: str, product_id: int):
        found = node.product(from_hex(addr, 20, "company address"), product_id)
        if found is None:
            raise NotFound("no such product")
        return schemas.product_model(found)

    @app.get("/v1/companies/{addr}/products/{product_id}/qr", response_model=schemas.QRTextResponse)
    def product_qr(addr: str, product_id: int):
        company_addr = from_hex(addr, 20, "company address")
        if node.product(company_addr, product_id) is None:
            raise NotFound("no such product")
        return schemas.QRTextResponse(payload=node.qr_payload(company_addr, product_id))

    @app.get("/v1/accounts/{addr}", response_model=schemas.AccountModel)
    def account(addr: str):
        address = from_hex(addr, 20, "address")
        return schemas.AccountModel(
            address=to_hex(address), balance_wei=str(node.balance(address)), nonce=node.nonce(address),
        )

    # -- QR, faucet, costs ----------------------------------------------------

    @app.post("/v1/qr/verify", response_model=schemas.VerdictResponse)
    def qr_verify(body: schemas.VerifyRequest):
        payload, verdict = node.verify_qr(body.payload)
        return schemas.verdict_response(payload, verdict)

    @app.post("/v1/faucet", status_code=202, response_model=schemas.TxAccepted)
    def faucet(body: schemas.FaucetRequest):
        tx_hash = node.faucet(from_hex(body.address, 20, "address"), schemas.parse_wei(body.amount_wei, "amount_wei"))
        return schemas.TxAccepted(tx_hash=to_hex(tx_hash))

    @app.get("/v1/costs", response_model=schemas.CostReportModel)
    def costs():
        return schemas.CostReportModel.model_validate(node.cost_report().to_dict())

    @app.get("/v1/gas-schedule", response_model=schemas.GasScheduleModel)
    def gas_schedule():
        s = node.store.params.schedule
        return schemas.GasScheduleModel(
            deploy_system=s.deploy_system, add_company=s.add_company,
            seller_registration=s.seller_registration, product_enrollment=s.product_enrollment,
            buy_product=s.buy_product, product_distribution=s.product_distribution,
            transfer=s.transfer, gas_price_wei=str(s.gas_price_wei),
        )

    return app


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="pchain-node", description="Run a pchain node")
    parser.add_argument("--config", help="config file path (overrides PCHAIN_CONFIG)")
    args = parser.parse_args(argv)

    config = load_config(args.config)
    node = Node(config)
    app = create_app(node)

    import uvicorn

    uvicorn.run(app, host=config.listen_host, port=config.listen_port, log_level="warning")
    return 0


if __name__ == "__main__":
    sys.exit(main())
