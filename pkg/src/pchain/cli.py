"""Operator and demo command line.

Thin client over the node HTTP API: every mutating command signs locally
with the keyfile seed, submits, produces a block, and reports the receipt.
Exit codes: 0 success, 1 rejection (service error code shown verbatim),
2 transport failure.
"""

from __future__ import annotations

import functools
import hashlib
import json as jsonlib
import os
import stat
import sys
from pathlib import Path

import click

from .chain import ChainParams
from .client import ApiError, NodeClient, default_node_url
from .config import DEFAULT_GAS_PRICE_WEI
from .contract import GasSchedule
from .errors import ChainError, CorruptLogError, TransportError
from .keys import KeyPair, address_from_hex, address_to_hex, generate_keypair
from .tx import (
    Action,
    BuyProduct,
    CreateCompany,
    DistributeProduct,
    EnrollProduct,
    RegisterSeller,
    SignedTransaction,
    sign_transaction,
)

DEFAULT_KEYFILE = "pchain.key"

# Fixed scenario parameters; reruns with the same --seed reproduce the same
# transactions and therefore the same final state root on any fresh node.
SCENARIO_COMPANY_NAME = "Aurora Electronics"
SCENARIO_MIN_FEE_WEI = 5 * 10**16
SCENARIO_PRODUCT_NAME = "Quantum Speaker"
SCENARIO_PRICE_WEI = 10**17
SCENARIO_STOCK = 5
SCENARIO_SELLER_NAME = "North Star Retail"
SCENARIO_QUANTITY = 2
SCENARIO_FAUCET_WEI = 10 * 10**18


def _echo_error(code: str, message: str, json_out: bool) -> None:
    if json_out:
        click.echo(jsonlib.dumps({"error": {"code": code, "message": message}}))
    else:
        click.echo(f"error: {code}: {message}", err=True)


def handle_errors(f):
    """Map client/domain failures onto the documented exit codes."""

    @functools.wraps(f)
    def wrapper(*args, **kwargs):
        ctx = click.get_current_context()
        json_out = ctx.obj.get("json", False)
        try:
            return f(*args, **kwargs)
        except TransportError as exc:
            _echo_error("Transport", str(exc), json_out)
            sys.exit(2)
        except ApiError as exc:
            _echo_error(exc.code, exc.message, json_out)
            sys.exit(1)
        except CorruptLogError as exc:
            _echo_error(exc.code, f"height {exc.height}: {exc.message}", json_out)
            sys.exit(1)
        except ChainError as exc:
            _echo_error(exc.code, exc.message, json_out)
            sys.exit(1)

    return wrapper


def _client(ctx) -> NodeClient:
    return NodeClient(ctx.obj["node_url"])


def _load_keypair(ctx) -> KeyPair:
    path = Path(ctx.obj["keyfile"])
    if not path.exists():
        raise ChainError("NoKeyfile", f"keyfile {path} not found; run `pchain keygen` first")
    seed = bytes.fromhex(path.read_text(encoding="utf-8").strip())
    return generate_keypair(seed)


def _emit(ctx, payload: dict, human_lines: list[str]) -> None:
    if ctx.obj.get("json"):
        click.echo(jsonlib.dumps(payload, indent=2))
    else:
        for line in human_lines:
            click.echo(line)


def _submit_and_mine(client: NodeClient, key: KeyPair, action: Action, value_wei: int) -> dict:
    """Sign with the next account nonce, submit, produce a block, fetch the receipt."""
    sender_hex = address_to_hex(key.address)
    nonce = client.account(sender_hex)["nonce"]
    tx = sign_transaction(
        SignedTransaction(sender=key.address, nonce=nonce, action=action, value_wei=value_wei), key
    )
    tx_hash = client.submit(tx)
    client.produce()
    receipt = client.receipt(tx_hash)
    if not receipt["success"]:
        raise ApiError(400, receipt["error"] or "ExecutionFailed", "transaction failed in block")
    return receipt


def _receipt_lines(receipt: dict) -> list[str]:
    lines = [
        f"  tx:   {receipt['tx_hash']}",
        f"  gas:  {receipt['gas_used']}",
        f"  fee:  {receipt['fee_wei']} wei",
    ]
    return lines


@click.group()
@click.option("--node", "node_url", default=None, help="node base URL (default: $PCHAIN_NODE_URL)")
@click.option("--keyfile", default=DEFAULT_KEYFILE, show_default=True, help="path to the signing keyfile")
@click.option("--json", "json_out", is_flag=True, help="machine-readable output")
@click.pass_context
def main(ctx, node_url, keyfile, json_out):
    """Supply-chain ledger client."""
    ctx.ensure_object(dict)
    ctx.obj["node_url"] = node_url or default_node_url()
    ctx.obj["keyfile"] = keyfile
    ctx.obj["json"] = json_out


@main.command()
@click.option("--seed", default=None, help="32-byte seed as hex (default: random)")
@click.option("--force", is_flag=True, help="overwrite an existing keyfile")
@click.pass_context
@handle_errors
def keygen(ctx, seed, force):
    """Generate a keypair and write the seed to the keyfile."""
    path = Path(ctx.obj["keyfile"])
    if path.exists() and not force:
        raise ChainError("KeyfileExists", f"{path} already exists; use --force to overwrite")
    key = generate_keypair(bytes.fromhex(seed) if seed else None)
    fd = os.open(path, os.O_WRONLY | os.O_CREAT | os.O_TRUNC, stat.S_IRUSR | stat.S_IWUSR)
    with os.fdopen(fd, "w", encoding="utf-8") as fh:
        fh.write(key.seed.hex() + "\n")
    address = address_to_hex(key.address)
    _emit(ctx, {"address": address, "keyfile": str(path)}, [f"address: {address}", f"keyfile: {path}"])


@main.command()
@click.option("--to", "to_addr", required=True, help="recipient address (0x...)")
@click.option("--wei", required=True, type=int, help="amount in wei")
@click.pass_context
@handle_errors
def faucet(ctx, to_addr, wei):
    """Request funds from the node faucet."""
    address_from_hex(to_addr)
    with _client(ctx) as client:
        tx_hash = client.faucet(to_addr, wei)
        client.produce()
        balance = client.account(to_addr)["balance_wei"]
    _emit(
        ctx,
        {"tx_hash": tx_hash, "address": to_addr, "balance_wei": balance},
        [f"funded {to_addr}", f"  tx:      {tx_hash}", f"  balance: {balance} wei"],
    )


@main.group()
def company():
    """Manufacturer: company management."""


@company.command("create")
@click.option("--name", required=True)
@click.option("--min-fee-wei", required=True, type=int, help="minimum seller registration fee")
@click.pass_context
@handle_errors
def company_create(ctx, name, min_fee_wei):
    """Create a company owned by the keyfile identity."""
    key = _load_keypair(ctx)
    with _client(ctx) as client:
        receipt = _submit_and_mine(client, key, CreateCompany(name=name, min_fee_wei=min_fee_wei), 0)
    _emit(
        ctx,
        {"company": receipt["company"], "receipt": receipt},
        [f"company created: {receipt['company']}", *_receipt_lines(receipt)],
    )


@main.group()
def product():
    """Manufacturer/seller: product lifecycle."""


@product.command("add")
@click.option("--company", "company_addr", required=True)
@click.option("--name", required=True)
@click.option("--price-wei", required=True, type=int)
@click.option("--stock", required=True, type=int)
@click.pass_context
@handle_errors
def product_add(ctx, company_addr, name, price_wei, stock):
    """Enroll a product (manufacturer only)."""
    key = _load_keypair(ctx)
    action = EnrollProduct(
        company=address_from_hex(company_addr), name=name, price_wei=price_wei, stock=stock
    )
    with _client(ctx) as client:
        receipt = _submit_and_mine(client, key, action, 0)
    _emit(
        ctx,
        {"product_id": receipt["product_id"], "receipt": receipt},
        [f"product enrolled: id {receipt['product_id']}", *_receipt_lines(receipt)],
    )


@product.command("buy")
@click.option("--company", "company_addr", required=True)
@click.option("--id", "product_id", required=True, type=int)
@click.option("--seller-name", required=True)
@click.option("--qty", required=True, type=int)
@click.option("--value-wei", required=True, type=int, help="payment; must cover price x qty")
@click.pass_context
@handle_errors
def product_buy(ctx, company_addr, product_id, seller_name, qty, value_wei):
    """Buy a product as a registered seller."""
    key = _load_keypair(ctx)
    action = BuyProduct(
        company=address_from_hex(company_addr), product_id=product_id,
        seller_name=seller_name, quantity=qty,
    )
    with _client(ctx) as client:
        receipt = _submit_and_mine(client, key, action, value_wei)
        state = client.product(company_addr, product_id)
    _emit(
        ctx,
        {"receipt": receipt, "product": state},
        [
            f"bought product {product_id} x{qty}: order {state['order_status']}",
            *_receipt_lines(receipt),
        ],
    )


@product.command("ship")
@click.option("--company", "company_addr", required=True)
@click.option("--id", "product_id", required=True, type=int)
@click.pass_context
@handle_errors
def product_ship(ctx, company_addr, product_id):
    """Ship the pending order (manufacturer only)."""
    key = _load_keypair(ctx)
    action = DistributeProduct(company=address_from_hex(company_addr), product_id=product_id)
    with _client(ctx) as client:
        receipt = _submit_and_mine(client, key, action, 0)
        state = client.product(company_addr, product_id)
    _emit(
        ctx,
        {"receipt": receipt, "product": state},
        [
            f"shipped product {product_id}: {state['status']}/{state['order_status']}",
            *_receipt_lines(receipt),
        ],
    )


@main.group()
def seller():
    """Seller: registration."""


@seller.command("register")
@click.option("--company", "company_addr", required=True)
@click.option("--value-wei", required=True, type=int, help="registration fee; must meet the company minimum")
@click.pass_context
@handle_errors
def seller_register(ctx, company_addr, value_wei):
    """Register the keyfile identity as a seller."""
    key = _load_keypair(ctx)
    action = RegisterSeller(company=address_from_hex(company_addr))
    with _client(ctx) as client:
        receipt = _submit_and_mine(client, key, action, value_wei)
    _emit(
        ctx,
        {"receipt": receipt},
        [f"registered as seller for {company_addr}", *_receipt_lines(receipt)],
    )


@main.group()
def qr():
    """Provenance QR payloads."""


@qr.command("show")
@click.option("--company", "company_addr", required=True)
@click.option("--id", "product_id", required=True, type=int)
@click.option("--png", "png_path", default=None, help="also write a QR symbol PNG")
@click.pass_context
@handle_errors
def qr_show(ctx, company_addr, product_id, png_path):
    """Print the product's QR payload text."""
    with _client(ctx) as client:
        payload = client.qr_payload(company_addr, product_id)
    if png_path:
        _write_qr_png(payload, png_path)
    _emit(
        ctx,
        {"payload": payload, "png": png_path},
        [payload] + ([f"wrote {png_path}"] if png_path else []),
    )


@qr.command("verify")
@click.option("--payload", default=None, help="payload text (pcv1:...)")
@click.option("--png", "png_path", default=None, help="read the payload from a QR symbol PNG")
@click.pass_context
@handle_errors
def qr_verify(ctx, payload, png_path):
    """Check a payload against chain state; exit 0 only for GENUINE."""
    if (payload is None) == (png_path is None):
        raise ChainError("Usage", "provide exactly one of --payload or --png")
    if png_path:
        payload = _read_qr_png(png_path)
    with _client(ctx) as client:
        result = client.verify_qr(payload)
    verdict = result["verdict"]
    lines = [verdict.upper()]
    if result.get("mismatched_fields"):
        lines.append("  mismatched: " + ", ".join(result["mismatched_fields"]))
    if result.get("reason"):
        lines.append(f"  reason: {result['reason']}")
    _emit(ctx, result, lines)
    if verdict != "Genuine":
        sys.exit(1)


def _write_qr_png(text: str, path: str) -> None:
    try:
        import cv2
    except ImportError:
        raise ChainError("NoImageSupport", "PNG output needs opencv-python-headless (pip install 'pchain[qr-image]')")
    encoder = cv2.QRCodeEncoder.create()
    matrix = encoder.encode(text)
    scale = 8
    img = cv2.resize(matrix, (matrix.shape[1] * scale, matrix.shape[0] * scale), interpolation=cv2.INTER_NEAREST)
    img = cv2.copyMakeBorder(img, 32, 32, 32, 32, cv2.BORDER_CONSTANT, value=255)
    if not cv2.imwrite(path, img):
        raise ChainError("WriteFailed", f"could not write {path}")


def _read_qr_png(path: str) -> str:
    try:
        import cv2
    except ImportError:
        raise ChainError("NoImageSupport", "PNG input needs opencv-python-headless (pip install 'pchain[qr-image]')")
    img = cv2.imread(path)
    if img is None:
        raise ChainError("ReadFailed", f"could not read {path}")
    text, _, _ = cv2.QRCodeDetector().detectAndDecode(img)
    if not text:
        raise ChainError("NoSymbol", "no decodable QR symbol found in the image")
    return text


@main.group()
def chain():
    """Chain inspection."""


@chain.command("validate")
@click.option("--log", "log_path", default=None, help="validate a local block log instead of the node")
@click.option("--producer", default=None, help="producer address for --log (default: zero-seed key)")
@click.option("--gas-price", default=DEFAULT_GAS_PRICE_WEI, type=int, show_default=True)
@click.pass_context
@handle_errors
def chain_validate(ctx, log_path, producer, gas_price):
    """Replay and verify every block; exit 1 at the first bad height."""
    if log_path:
        from dataclasses import replace as dc_replace

        from .blocklog import load_store

        producer_addr = address_from_hex(producer) if producer else generate_keypair(b"\x00" * 32).address
        params = ChainParams(producer=producer_addr, schedule=dc_replace(GasSchedule(), gas_price_wei=gas_price))
        store = load_store(log_path, params)  # raises CorruptLog with the height
        result = {"ok": True, "height": store.head.height, "reason": None}
    else:
        with _client(ctx) as client:
            result = client.validate()
    if result["ok"]:
        height = result.get("height")
        message = f"ok: chain valid through height {height}" if height is not None else "ok: chain valid"
        _emit(ctx, result, [message])
    else:
        _emit(ctx, result, [f"INVALID at height {result['height']}: {result['reason']}"])
        sys.exit(1)


@main.group()
def costs():
    """Operation cost reporting."""


def _costs_lines(report: dict) -> list[str]:
    lines = [f"{'operation':<24} {'gas':>9} {'fee (ETH)':>11} {'fee (USD)':>10}"]
    flagged = False
    for row in report["rows"]:
        mark = "*" if row.get("note") else " "
        flagged = flagged or bool(row.get("note"))
        lines.append(
            f"{row['description']:<24} {row['gas']:>9} {row['reference_fee_eth']:>10}{mark} {row['reference_fee_usd']:>10}"
        )
    totals = report["totals"]
    lines.append(f"{'total':<24} {'':>9} {totals['reference_fee_eth']:>10}  {totals['reference_fee_usd']:>10}")
    if flagged:
        lines.append("* published fee; disagrees with gas x gas price (see note in --json output)")
    return lines


@costs.command("report")
@click.pass_context
@handle_errors
def costs_report(ctx):
    """Print the per-operation cost table."""
    with _client(ctx) as client:
        report = client.costs()
    _emit(ctx, report, _costs_lines(report))


@main.group()
def scenario():
    """Scripted demonstrations."""


def scenario_keys(seed: bytes | None) -> tuple[KeyPair, KeyPair]:
    """Manufacturer key from the seed, seller key from its SHA-256."""
    manufacturer = generate_keypair(seed)
    seller_seed = hashlib.sha256(manufacturer.seed).digest()
    return manufacturer, generate_keypair(seller_seed)


def run_scenario(client: NodeClient, seed: bytes | None = None) -> dict:
    """Full lifecycle: fund, create, enroll, register, buy, ship, verify."""
    manufacturer, seller_key = scenario_keys(seed)
    m_hex = address_to_hex(manufacturer.address)
    s_hex = address_to_hex(seller_key.address)
    steps: list[dict] = []

    def step(name: str, receipt: dict) -> dict:
        steps.append({"step": name, "tx_hash": receipt.get("tx_hash"), "receipt": receipt})
        return receipt

    for addr in (m_hex, s_hex):
        tx_hash = client.faucet(addr, SCENARIO_FAUCET_WEI)
        client.produce()
        step(f"faucet {addr}", client.receipt(tx_hash))

    created = step(
        "create company",
        _submit_and_mine(client, manufacturer, CreateCompany(SCENARIO_COMPANY_NAME, SCENARIO_MIN_FEE_WEI), 0),
    )
    company_addr = created["company"]
    company_bytes = address_from_hex(company_addr)

    enrolled = step(
        "enroll product",
        _submit_and_mine(
            client, manufacturer,
            EnrollProduct(company_bytes, SCENARIO_PRODUCT_NAME, SCENARIO_PRICE_WEI, SCENARIO_STOCK), 0,
        ),
    )
    product_id = enrolled["product_id"]

    step(
        "register seller (exact minimum fee)",
        _submit_and_mine(client, seller_key, RegisterSeller(company_bytes), SCENARIO_MIN_FEE_WEI),
    )
    step(
        "buy product (exact value)",
        _submit_and_mine(
            client, seller_key,
            BuyProduct(company_bytes, product_id, SCENARIO_SELLER_NAME, SCENARIO_QUANTITY),
            SCENARIO_PRICE_WEI * SCENARIO_QUANTITY,
        ),
    )

    pre_ship_payload = client.qr_payload(company_addr, product_id)
    pre_ship = client.verify_qr(pre_ship_payload)

    step(
        "ship product",
        _submit_and_mine(client, manufacturer, DistributeProduct(company_bytes, product_id), 0),
    )

    payload = client.qr_payload(company_addr, product_id)
    verdict = client.verify_qr(payload)
    head = client.head()
    return {
        "company": company_addr,
        "product_id": product_id,
        "steps": steps,
        "pre_ship_verdict": pre_ship,
        "qr_payload": payload,
        "verdict": verdict,
        "state_root": head["state_root"],
        "costs": client.costs(),
    }


@scenario.command("run")
@click.option("--seed", default=None, help="32-byte hex seed for deterministic keys")
@click.pass_context
@handle_errors
def scenario_run(ctx, seed):
    """Run the full lifecycle and print the cost table."""
    seed_bytes = bytes.fromhex(seed) if seed else None
    with _client(ctx) as client:
        result = run_scenario(client, seed_bytes)
    lines = []
    for entry in result["steps"]:
        receipt = entry["receipt"]
        lines.append(f"ok   {entry['step']}  gas={receipt['gas_used']}")
    lines.append(f"pre-ship verdict: {result['pre_ship_verdict']['verdict']} ({result['pre_ship_verdict']['reason']})")
    lines.append(f"qr payload: {result['qr_payload']}")
    lines.append(f"verdict: {result['verdict']['verdict'].upper()}")
    lines.append(f"state root: {result['state_root']}")
    lines.append("")
    lines.extend(_costs_lines(result["costs"]))
    _emit(ctx, result, lines)
    if result["verdict"]["verdict"] != "Genuine":
        sys.exit(1)


if __name__ == "__main__":
    main()
