"""Command line end to end: a live node, real HTTP, documented exit codes."""

import json
import stat

import pytest
from click.testing import CliRunner

from pchain.cli import main
from pchain.config import NodeConfig
from pchain.node import Node

ETH = 10**18
M_SEED = "21" * 32
S_SEED = "22" * 32


def invoke(args, url=None, keyfile=None, json_out=False):
    prefix = []
    if url:
        prefix += ["--node", url]
    if keyfile:
        prefix += ["--keyfile", str(keyfile)]
    if json_out:
        prefix += ["--json"]
    return CliRunner().invoke(main, prefix + args)


def keygen(tmp_path, name, seed):
    keyfile = tmp_path / name
    result = invoke(["keygen", "--seed", seed], keyfile=keyfile, json_out=True)
    assert result.exit_code == 0, result.output
    return keyfile, json.loads(result.output)["address"]


# -- keygen ------------------------------------------------------------------------

def test_keygen_writes_private_keyfile(tmp_path):
    keyfile = tmp_path / "demo.key"
    result = invoke(["keygen", "--seed", M_SEED], keyfile=keyfile)
    assert result.exit_code == 0
    assert "address: 0x" in result.output
    assert keyfile.read_text().strip() == M_SEED
    assert stat.S_IMODE(keyfile.stat().st_mode) == 0o600

    again = invoke(["keygen"], keyfile=keyfile)
    assert again.exit_code == 1
    assert "KeyfileExists" in again.output

    forced = invoke(["keygen", "--force"], keyfile=keyfile)
    assert forced.exit_code == 0
    assert keyfile.read_text().strip() != M_SEED  # fresh random seed


def test_keygen_same_seed_same_address(tmp_path):
    _, first = keygen(tmp_path, "a.key", M_SEED)
    _, second = keygen(tmp_path, "b.key", M_SEED)
    assert first == second


# -- full lifecycle ------------------------------------------------------------------

def test_full_flow_and_exit_codes(start_node, tmp_path):
    url = start_node()
    m_key, m_addr = keygen(tmp_path, "manufacturer.key", M_SEED)
    s_key, s_addr = keygen(tmp_path, "seller.key", S_SEED)

    for addr in (m_addr, s_addr):
        result = invoke(["faucet", "--to", addr, "--wei", str(10 * ETH)], url=url, json_out=True)
        assert result.exit_code == 0, result.output
        assert json.loads(result.output)["balance_wei"] == str(10 * ETH)

    result = invoke(
        ["company", "create", "--name", "Acme", "--min-fee-wei", str(10**16)],
        url=url, keyfile=m_key, json_out=True,
    )
    assert result.exit_code == 0, result.output
    company = json.loads(result.output)["company"]
    assert company.startswith("0x") and len(company) == 42

    result = invoke(
        ["product", "add", "--company", company, "--name", "Watch",
         "--price-wei", str(10**15), "--stock", "4"],
        url=url, keyfile=m_key, json_out=True,
    )
    assert result.exit_code == 0, result.output
    product_id = json.loads(result.output)["product_id"]
    assert product_id == 0

    # payload issued before shipping does not verify as genuine
    shown = invoke(["qr", "show", "--company", company, "--id", "0"], url=url)
    assert shown.exit_code == 0
    pre_ship_payload = shown.output.strip()
    assert pre_ship_payload.startswith("pcv1:")
    early = invoke(["qr", "verify", "--payload", pre_ship_payload], url=url)
    assert early.exit_code == 1
    assert "UNKNOWN" in early.output
    assert "NotYetShipped" in early.output

    result = invoke(
        ["seller", "register", "--company", company, "--value-wei", str(10**16)],
        url=url, keyfile=s_key,
    )
    assert result.exit_code == 0, result.output

    result = invoke(
        ["product", "buy", "--company", company, "--id", "0", "--seller-name", "Best Shop",
         "--qty", "2", "--value-wei", str(2 * 10**15)],
        url=url, keyfile=s_key,
    )
    assert result.exit_code == 0, result.output
    assert "order Pending" in result.output

    result = invoke(["product", "ship", "--company", company, "--id", "0"], url=url, keyfile=m_key)
    assert result.exit_code == 0, result.output
    assert "Shipped/Complete" in result.output

    shown = invoke(["qr", "show", "--company", company, "--id", "0"], url=url)
    payload = shown.output.strip()
    verified = invoke(["qr", "verify", "--payload", payload], url=url)
    assert verified.exit_code == 0, verified.output
    assert "GENUINE" in verified.output

    # the stale pre-ship payload now reports the drifted fields
    stale = invoke(["qr", "verify", "--payload", pre_ship_payload], url=url, json_out=True)
    assert stale.exit_code == 1
    stale_body = json.loads(stale.output)
    assert stale_body["verdict"] == "Mismatch"
    assert set(stale_body["mismatched_fields"]) == {"owner_address", "owner_name", "status", "order_status"}

    result = invoke(["chain", "validate"], url=url)
    assert result.exit_code == 0
    assert "ok: chain valid" in result.output


def test_rejected_contract_call_exits_1(start_node, tmp_path):
    url = start_node()
    m_key, m_addr = keygen(tmp_path, "m.key", M_SEED)
    s_key, s_addr = keygen(tmp_path, "s.key", S_SEED)
    for addr in (m_addr, s_addr):
        assert invoke(["faucet", "--to", addr, "--wei", str(10 * ETH)], url=url).exit_code == 0
    created = invoke(
        ["company", "create", "--name", "Acme", "--min-fee-wei", str(10**18)],
        url=url, keyfile=m_key, json_out=True,
    )
    company = json.loads(created.output)["company"]
    result = invoke(
        ["seller", "register", "--company", company, "--value-wei", "1"],
        url=url, keyfile=s_key,
    )
    assert result.exit_code == 1
    assert "FeeTooLow" in result.output


def test_submit_rejection_exits_1(start_node, tmp_path):
    url = start_node()
    key, _ = keygen(tmp_path, "poor.key", M_SEED)  # never funded
    result = invoke(
        ["company", "create", "--name", "Acme", "--min-fee-wei", "1"],
        url=url, keyfile=key,
    )
    assert result.exit_code == 1
    assert "InsufficientBalance" in result.output


def test_unreachable_node_exits_2(tmp_path):
    key, _ = keygen(tmp_path, "k.key", M_SEED)
    result = invoke(["chain", "validate"], url="http://127.0.0.1:9")
    assert result.exit_code == 2
    assert "Transport" in result.output


def test_missing_keyfile_exits_1(start_node, tmp_path):
    url = start_node()
    result = invoke(
        ["company", "create", "--name", "Acme", "--min-fee-wei", "1"],
        url=url, keyfile=tmp_path / "absent.key",
    )
    assert result.exit_code == 1
    assert "NoKeyfile" in result.output


def test_malformed_address_exits_1(start_node):
    url = start_node()
    result = invoke(["faucet", "--to", "0xNOPE", "--wei", "1"], url=url)
    assert result.exit_code == 1
    assert "KeyInvalid" in result.output


def test_qr_verify_requires_exactly_one_source(start_node):
    url = start_node()
    neither = invoke(["qr", "verify"], url=url)
    assert neither.exit_code == 1
    assert "Usage" in neither.output
    both = invoke(["qr", "verify", "--payload", "pcv1:AA", "--png", "x.png"], url=url)
    assert both.exit_code == 1


def test_faucet_disabled_surfaces_code(start_node, tmp_path):
    url = start_node(faucet_enabled=False)
    result = invoke(["faucet", "--to", "0x" + "11" * 20, "--wei", "1"], url=url)
    assert result.exit_code == 1
    assert "FaucetDisabled" in result.output


# -- costs ---------------------------------------------------------------------------

def test_costs_table(start_node):
    url = start_node()
    result = invoke(["costs", "report"], url=url)
    assert result.exit_code == 0
    assert "Deploy System" in result.output
    assert "1068597" in result.output
    assert "0.002755" in result.output
    assert "8.56" in result.output
    assert "*" in result.output  # deploy row is annotated

    as_json = invoke(["costs", "report"], url=url, json_out=True)
    report = json.loads(as_json.output)
    assert report["totals"]["reference_fee_usd"] == "8.56"
    assert len(report["rows"]) == 6


# -- scenario ---------------------------------------------------------------------------

def test_scenario_runs_genuine(start_node):
    url = start_node()
    result = invoke(["scenario", "run", "--seed", "07" * 32], url=url)
    assert result.exit_code == 0, result.output
    assert "pre-ship verdict: Unknown (NotYetShipped)" in result.output
    assert "verdict: GENUINE" in result.output
    assert "state root: 0x" in result.output
    assert "Deploy System" in result.output


def test_scenario_is_deterministic_across_fresh_nodes(start_node):
    roots = []
    for _ in range(2):
        url = start_node()
        result = invoke(["scenario", "run", "--seed", "07" * 32], url=url, json_out=True)
        assert result.exit_code == 0, result.output
        roots.append(json.loads(result.output)["state_root"])
    assert roots[0] == roots[1]

    url = start_node()
    other = invoke(["scenario", "run", "--seed", "08" * 32], url=url, json_out=True)
    assert json.loads(other.output)["state_root"] != roots[0]


# -- offline log validation -----------------------------------------------------------

def build_log(tmp_path):
    path = tmp_path / "offline.blocklog"
    node = Node(NodeConfig(block_log_path=str(path)))
    node.faucet(b"\x42" * 20, ETH)
    node.produce(timestamp=1)
    node.faucet(b"\x43" * 20, ETH)
    node.produce(timestamp=2)
    node.close()
    return path


def test_chain_validate_offline_log(tmp_path):
    path = build_log(tmp_path)
    result = invoke(["chain", "validate", "--log", str(path)])
    assert result.exit_code == 0
    assert "ok: chain valid through height 2" in result.output


def test_chain_validate_offline_detects_tampering(tmp_path):
    path = build_log(tmp_path)
    data = bytearray(path.read_bytes())
    data[-10] ^= 0xFF  # corrupt a byte of block 2
    path.write_bytes(bytes(data))
    result = invoke(["chain", "validate", "--log", str(path)])
    assert result.exit_code == 1
    assert "CorruptLog" in result.output
    assert "height" in result.output


def test_chain_validate_offline_wrong_producer(tmp_path):
    path = build_log(tmp_path)
    result = invoke(["chain", "validate", "--log", str(path), "--producer", "0x" + "99" * 20])
    assert result.exit_code == 1
    assert "CorruptLog" in result.output


# -- QR PNG round trip --------------------------------------------------------------------

def test_qr_png_round_trip(start_node, tmp_path):
    pytest.importorskip("cv2")
    url = start_node()
    run = invoke(["scenario", "run", "--seed", "0a" * 32], url=url, json_out=True)
    assert run.exit_code == 0, run.output
    body = json.loads(run.output)
    company, product_id = body["company"], body["product_id"]

    png = tmp_path / "label.png"
    shown = invoke(
        ["qr", "show", "--company", company, "--id", str(product_id), "--png", str(png)], url=url
    )
    assert shown.exit_code == 0, shown.output
    assert png.exists() and png.stat().st_size > 0

    verified = invoke(["qr", "verify", "--png", str(png)], url=url)
    assert verified.exit_code == 0, verified.output
    assert "GENUINE" in verified.output
