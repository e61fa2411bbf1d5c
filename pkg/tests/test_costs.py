"""Cost report: gas-to-ETH arithmetic, USD conversion, reference column."""

from dataclasses import replace
from decimal import Decimal

from pchain.contract import GasSchedule
from pchain.costs import (
    DEFAULT_ETH_USD_RATE,
    build_cost_report,
    fee_eth,
)

# Published per-operation fees and their USD value at 3106.72 $/ETH.
EXPECTED_ROWS = [
    ("Deploy System", 133405, Decimal("0.001333"), Decimal("4.14")),
    ("Adding New Company", 1068597, Decimal("0.001069"), Decimal("3.32")),
    ("Seller Registration", 45755, Decimal("0.000046"), Decimal("0.14")),
    ("Product Enrollment", 208571, Decimal("0.000209"), Decimal("0.65")),
    ("Buying Product", 41581, Decimal("0.000042"), Decimal("0.13")),
    ("Product Distribution", 55578, Decimal("0.000056"), Decimal("0.17")),
]


def default_report():
    return build_cost_report(GasSchedule())


def test_reference_rows_and_usd_values():
    report = default_report()
    assert report.eth_usd_rate == DEFAULT_ETH_USD_RATE == Decimal("3106.72")
    assert [
        (r.description, r.gas, r.reference_fee_eth, r.reference_fee_usd) for r in report.rows
    ] == EXPECTED_ROWS


def test_reference_totals():
    report = default_report()
    assert report.total_reference_fee_eth == Decimal("0.002755")
    assert report.total_reference_fee_usd == Decimal("8.56")


def test_computed_fees_match_reference_except_deploy():
    report = default_report()
    deploy, *rest = report.rows
    assert deploy.fee_eth == Decimal("0.000133")  # 133405 gas at 1 gwei
    assert deploy.reference_fee_eth == Decimal("0.001333")
    assert deploy.note is not None
    for row in rest:
        assert row.fee_eth == row.reference_fee_eth, row.description
        assert row.fee_usd == row.reference_fee_usd
        assert row.note is None


def test_computed_totals_follow_the_gas_column():
    report = default_report()
    assert report.total_fee_eth == Decimal("0.001555")
    assert report.total_fee_usd == Decimal("4.83")


def test_fee_eth_rounding():
    assert fee_eth(21000, 10**9) == Decimal("0.000021")
    assert fee_eth(1234567, 10**9) == Decimal("0.001235")  # half-up at 6 places
    assert fee_eth(1, 5 * 10**11) == Decimal("0.000001")  # exactly .5 ulp rounds up
    assert fee_eth(0, 10**9) == Decimal("0.000000")


def test_report_scales_with_gas_price():
    schedule = replace(GasSchedule(), gas_price_wei=2 * 10**9)
    report = build_cost_report(schedule)
    assert report.gas_price_wei == 2 * 10**9
    deploy = report.rows[0]
    assert deploy.fee_eth == Decimal("0.000267")
    assert all(row.note is not None for row in report.rows)  # fees no longer match


def test_report_accepts_custom_rate():
    report = build_cost_report(GasSchedule(), eth_usd_rate=Decimal("2000"))
    assert report.rows[0].reference_fee_usd == Decimal("2.67")
    assert report.total_reference_fee_usd == Decimal("5.51")


def test_to_dict_is_json_friendly():
    data = default_report().to_dict()
    assert data["gas_price_wei"] == "1000000000"
    assert data["eth_usd_rate"] == "3106.72"
    assert len(data["rows"]) == 6
    first = data["rows"][0]
    assert first["description"] == "Deploy System"
    assert first["gas"] == 133405
    assert isinstance(first["fee_eth"], str) and isinstance(first["fee_usd"], str)
    assert data["totals"]["reference_fee_eth"] == "0.002755"
    assert data["totals"]["reference_fee_usd"] == "8.56"
