/**
 * Pure HTML renderers for the console panels.
 *
 * Every function maps API data to an HTML string with no state of its own;
 * app.ts injects the strings and wires events. Keeping these pure makes the
 * spec-visible behavior (verdict panels, inline errors, status chips)
 * testable without a browser.
 */

import type { CompanyModel, CostReportModel, ProductModel, ReceiptModel } from "./api";
import type { VerifyOutcome } from "./flows";

export function escapeHtml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;")
    .replaceAll("'", "&#39;");
}

const WEI_PER_ETH = 10n ** 18n;

/** "1.05 ETH" / "0.000021 ETH" — display only, never fed back into amounts. */
export function formatEth(wei: bigint): string {
  const whole = wei / WEI_PER_ETH;
  const frac = (wei % WEI_PER_ETH).toString().padStart(18, "0").replace(/0+$/, "");
  return frac ? `${whole}.${frac} ETH` : `${whole} ETH`;
}

export function shortAddr(hex: string): string {
  return hex.length > 14 ? `${hex.slice(0, 8)}…${hex.slice(-4)}` : hex;
}

export function errorInline(code: string, message: string): string {
  return `<div class="inline-error" role="alert"><strong>${escapeHtml(code)}</strong> ${escapeHtml(message)}</div>`;
}

export function receiptCard(receipt: ReceiptModel, label: string): string {
  const outcome = receipt.success
    ? `<span class="chip ok">ok</span>`
    : `<span class="chip fail">${escapeHtml(receipt.error ?? "failed")}</span>`;
  return (
    `<div class="receipt">${outcome} <strong>${escapeHtml(label)}</strong>` +
    ` <span class="muted">block ${receipt.height} · gas ${receipt.gas_used} · fee ${formatEth(BigInt(receipt.fee_wei))}</span>` +
    `</div>`
  );
}

export function statusChip(product: Pick<ProductModel, "status" | "order_status">): string {
  const key = product.status === "Shipped" ? "shipped" : product.order_status === "Pending" ? "pending" : "ready";
  return `<span class="chip status-${key}">${escapeHtml(product.status)} / ${escapeHtml(product.order_status)}</span>`;
}

export function productRow(product: ProductModel, actionCell = ""): string {
  return (
    `<tr data-product-id="${product.id}">` +
    `<td>${product.id}</td>` +
    `<td>${escapeHtml(product.name)}</td>` +
    `<td>${formatEth(BigInt(product.price_wei))}</td>` +
    `<td>${product.stock}</td>` +
    `<td>${statusChip(product)}</td>` +
    `<td>${product.owner_name ? escapeHtml(product.owner_name) : "<span class=\"muted\">—</span>"}</td>` +
    `<td>${actionCell}</td>` +
    `</tr>`
  );
}

export function productTable(products: ProductModel[], actionCell: (p: ProductModel) => string = () => ""): string {
  if (products.length === 0) return `<p class="muted">No products.</p>`;
  const rows = products.map((p) => productRow(p, actionCell(p))).join("");
  return (
    `<table class="products"><thead><tr>` +
    `<th>#</th><th>Name</th><th>Price</th><th>Stock</th><th>Status</th><th>Owner</th><th></th>` +
    `</tr></thead><tbody>${rows}</tbody></table>`
  );
}

export function companyCard(company: CompanyModel): string {
  const sellers = company.sellers.filter((s) => s.registered).length;
  return (
    `<div class="company" data-company="${escapeHtml(company.contract_address)}">` +
    `<strong>${escapeHtml(company.name)}</strong>` +
    ` <span class="muted">${shortAddr(company.contract_address)}</span>` +
    `<div class="muted">min registration fee ${formatEth(BigInt(company.min_fee_wei))} · ${sellers} seller(s) · ${company.products.length} product(s)</div>` +
    `</div>`
  );
}

/** The consumer result panel: Genuine (green), Mismatch (fields), Unknown, invalid. */
export function verdictPanel(outcome: VerifyOutcome): string {
  if (outcome.kind === "invalid") {
    return (
      `<div class="panel verdict invalid" role="status">` +
      `<h3>Invalid code</h3>` +
      `<p>This is not a readable provenance code (${escapeHtml(outcome.code)}).</p>` +
      `</div>`
    );
  }
  const { verdict, mismatched_fields, reason, payload } = outcome.result;
  const chainFacts =
    `<dl class="chain-facts">` +
    `<dt>Manufacturer</dt><dd>${shortAddr(escapeHtml(payload.manufacturer))}</dd>` +
    `<dt>Owner</dt><dd>${payload.owner_name ? escapeHtml(payload.owner_name) : "—"} (${shortAddr(escapeHtml(payload.owner_address))})</dd>` +
    `<dt>Status</dt><dd>${escapeHtml(payload.status)} / ${escapeHtml(payload.order_status)}</dd>` +
    `</dl>`;
  if (verdict === "Genuine") {
    return (
      `<div class="panel verdict genuine" role="status">` +
      `<h3>Genuine</h3>` +
      `<p>Provenance verified: ownership and shipment match the chain.</p>` +
      chainFacts +
      `</div>`
    );
  }
  if (verdict === "Mismatch") {
    const flags = mismatched_fields.map((f) => `<span class="field-flag">${escapeHtml(f)}</span>`).join(" ");
    return (
      `<div class="panel verdict mismatch" role="status">` +
      `<h3>Mismatch</h3>` +
      `<p>The code disagrees with the chain on: ${flags}</p>` +
      chainFacts +
      `</div>`
    );
  }
  return (
    `<div class="panel verdict unknown" role="status">` +
    `<h3>Unknown</h3>` +
    `<p>${escapeHtml(reason ?? "This code does not match any product on this chain.")}</p>` +
    `</div>`
  );
}

/** Per-operation fees, published columns, matching the CLI's table. */
export function costTable(report: CostReportModel): string {
  const rows = report.rows
    .map(
      (r) =>
        `<tr><td>${escapeHtml(r.description)}</td><td>${r.gas}</td>` +
        `<td>${escapeHtml(r.reference_fee_eth)}${r.note ? " *" : ""}</td>` +
        `<td>$${escapeHtml(r.reference_fee_usd)}</td></tr>`,
    )
    .join("");
  const notes = report.rows
    .filter((r) => r.note)
    .map((r) => `<p class="muted">* ${escapeHtml(r.description)}: ${escapeHtml(r.note ?? "")}</p>`)
    .join("");
  return (
    `<table class="costs"><thead><tr><th>Operation</th><th>Gas</th><th>Fee (ETH)</th><th>Fee (USD)</th></tr></thead>` +
    `<tbody>${rows}</tbody>` +
    `<tfoot><tr><td>Total</td><td></td><td>${escapeHtml(report.totals.reference_fee_eth)}</td>` +
    `<td>$${escapeHtml(report.totals.reference_fee_usd)}</td></tr></tfoot></table>` +
    notes
  );
}
