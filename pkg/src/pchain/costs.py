"""Per-operation cost report: gas, ETH fees, and USD conversion.

Each row carries two fee columns: the fee computed from gas x gas price, and
the published reference fee the system reproduces. At the default 1 gwei gas
price the two agree for every row except contract deployment, whose published
fee (0.001333 ETH) does not match its own gas figure (133405 gas = 0.000133
ETH); that row is annotated rather than silently corrected, and the published
column is what the totals follow.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal

from .contract import GasSchedule

WEI_PER_ETH = Decimal(10) ** 18
DEFAULT_ETH_USD_RATE = Decimal("3106.72")

_ETH_PLACES = Decimal("0.000001")
_USD_PLACES = Decimal("0.01")

# (row description, schedule attribute, published fee in ETH)
REFERENCE_ROWS: tuple[tuple[str, str, Decimal], ...] = (
    ("Deploy System", "deploy_system", Decimal("0.001333")),
    ("Adding New Company", "add_company", Decimal("0.001069")),
    ("Seller Registration", "seller_registration", Decimal("0.000046")),
    ("Product Enrollment", "product_enrollment", Decimal("0.000209")),
    ("Buying Product", "buy_product", Decimal("0.000042")),
    ("Product Distribution", "product_distribution", Decimal("0.000056")),
)


@dataclass(frozen=True)
class CostRow:
    description: str
    gas: int
    fee_eth: Decimal
    fee_usd: Decimal
    reference_fee_eth: Decimal
    reference_fee_usd: Decimal
    note: str | None = None


@dataclass(frozen=True)
class CostReport:
    gas_price_wei: int
    eth_usd_rate: Decimal
    rows: tuple[CostRow, ...]
    total_fee_eth: Decimal
    total_fee_usd: Decimal
    total_reference_fee_eth: Decimal
    total_reference_fee_usd: Decimal

    def to_dict(self) -> dict:
        return {
            "gas_price_wei": str(self.gas_price_wei),
            "eth_usd_rate": str(self.eth_usd_rate),
            "rows": [
                {
                    "description": row.description,
                    "gas": row.gas,
                    "fee_eth": str(row.fee_eth),
                    "fee_usd": str(row.fee_usd),
                    "reference_fee_eth": str(row.reference_fee_eth),
                    "reference_fee_usd": str(row.reference_fee_usd),
                    "note": row.note,
                }
                for row in self.rows
            ],
            "totals": {
                "fee_eth": str(self.total_fee_eth),
                "fee_usd": str(self.total_fee_usd),
                "reference_fee_eth": str(self.total_reference_fee_eth),
                "reference_fee_usd": str(self.total_reference_fee_usd),
            },
        }


def fee_eth(gas: int, gas_price_wei: int) -> Decimal:
    """gas x gas price in ETH, rounded to 6 decimals."""
    exact = Decimal(gas) * Decimal(gas_price_wei) / WEI_PER_ETH
    return exact.quantize(_ETH_PLACES, rounding=ROUND_HALF_UP)


def _usd(eth: Decimal, rate: Decimal) -> Decimal:
    return (eth * rate).quantize(_USD_PLACES, rounding=ROUND_HALF_UP)


def build_cost_report(schedule: GasSchedule, eth_usd_rate: Decimal = DEFAULT_ETH_USD_RATE) -> CostReport:
    rows = []
    for description, attr, reference in REFERENCE_ROWS:
        gas = getattr(schedule, attr)
        computed = fee_eth(gas, schedule.gas_price_wei)
        note = None
        if computed != reference:
            note = (
                f"published fee {reference} ETH disagrees with gas x gas price "
                f"({computed} ETH at {schedule.gas_price_wei} wei/gas)"
            )
        rows.append(CostRow(
            description=description, gas=gas,
            fee_eth=computed, fee_usd=_usd(computed, eth_usd_rate),
            reference_fee_eth=reference, reference_fee_usd=_usd(reference, eth_usd_rate),
            note=note,
        ))
    total_eth = sum((r.fee_eth for r in rows), Decimal(0))
    total_ref_eth = sum((r.reference_fee_eth for r in rows), Decimal(0))
    return CostReport(
        gas_price_wei=schedule.gas_price_wei,
        eth_usd_rate=eth_usd_rate,
        rows=tuple(rows),
        total_fee_eth=total_eth,
        total_fee_usd=_usd(total_eth, eth_usd_rate),
        total_reference_fee_eth=total_ref_eth,
        total_reference_fee_usd=_usd(total_ref_eth, eth_usd_rate),
    )
