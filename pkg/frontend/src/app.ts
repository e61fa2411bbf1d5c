/**
 * Console shell: session panel, role tabs, and event wiring.
 *
 * All state shown here is fetched from the node; this layer only routes form
 * input into flows and flow results into the pure renderers in views.ts.
 */

import { ApiError, NodeApi } from "./api";
import type { CompanyModel } from "./api";
import { cameraAvailable, startCameraScan } from "./camera";
import type { CameraScan } from "./camera";
import { ManufacturerFlow, SellerFlow, Session, verifyPayload } from "./flows";
import type { SessionOptions } from "./flows";
import { SessionKey } from "./keys";
import { toHex } from "./hex";
import {
  companyCard,
  costTable,
  errorInline,
  escapeHtml,
  formatEth,
  productTable,
  receiptCard,
  verdictPanel,
} from "./views";

const TABS = ["manufacturer", "seller", "consumer", "costs"] as const;
type Tab = (typeof TABS)[number];

function parseWei(raw: string, label: string): bigint {
  const text = raw.trim();
  if (!/^(0|[1-9][0-9]*)$/.test(text)) throw new Error(`${label}: enter a wei amount as a plain decimal`);
  return BigInt(text);
}

function parseCount(raw: string, label: string): number {
  const value = Number(raw.trim());
  if (!Number.isInteger(value) || value < 0) throw new Error(`${label}: enter a non-negative integer`);
  return value;
}

function describeError(err: unknown): string {
  if (err instanceof ApiError) return errorInline(err.code, err.message);
  return errorInline("Error", err instanceof Error ? err.message : String(err));
}

export class ConsoleApp {
  session: Session | null = null;
  private scan: CameraScan | null = null;

  constructor(
    readonly root: HTMLElement,
    readonly api: NodeApi,
    readonly sessionOptions: SessionOptions = {},
  ) {}

  private el<T extends HTMLElement>(id: string): T {
    const found = this.root.querySelector<T>(`#${id}`);
    if (!found) throw new Error(`missing element #${id}`);
    return found;
  }

  private setHtml(id: string, html: string): void {
    this.el(id).innerHTML = html;
  }

  private requireSession(): Session {
    if (!this.session) throw new Error("load a session key first (Session panel)");
    return this.session;
  }

  render(): void {
    this.root.innerHTML = `
      <header>
        <h1>pchain console</h1>
        <div id="head-info" class="muted"></div>
        <button id="produce-btn" type="button" title="ask the node for a block">Produce block</button>
      </header>
      <section class="panel" id="session-panel">
        <h2>Session</h2>
        <div class="row">
          <input id="seed-input" type="password" placeholder="32-byte seed, hex" autocomplete="off">
          <button id="seed-load-btn" type="button">Use seed</button>
          <button id="seed-gen-btn" type="button">Generate key</button>
        </div>
        <div id="session-info" class="muted">No key loaded. Keys stay in this tab; only signatures leave it.</div>
        <div class="row">
          <input id="faucet-wei" inputmode="numeric" placeholder="faucet amount (wei)" value="10000000000000000000">
          <button id="faucet-btn" type="button">Request funds</button>
        </div>
        <div id="session-status"></div>
      </section>
      <nav id="tabs">${TABS.map((t) => `<button type="button" data-tab="${t}">${t}</button>`).join("")}</nav>

      <section class="tab" id="tab-manufacturer">
        <h2>Manufacturer</h2>
        <form id="create-company-form" class="card">
          <h3>Create company</h3>
          <input id="cc-name" placeholder="company name" required>
          <input id="cc-min-fee" inputmode="numeric" placeholder="min registration fee (wei)" required>
          <button type="submit">Create</button>
        </form>
        <form id="enroll-form" class="card">
          <h3>Enroll product</h3>
          <select id="en-company"></select>
          <input id="en-name" placeholder="product name" required>
          <input id="en-price" inputmode="numeric" placeholder="price (wei)" required>
          <input id="en-stock" inputmode="numeric" placeholder="stock" required>
          <button type="submit">Enroll</button>
        </form>
        <div id="manufacturer-status"></div>
        <h3>My companies</h3>
        <div id="my-companies"></div>
        <h3>Products &amp; pending orders</h3>
        <div id="my-products"></div>
      </section>

      <section class="tab" id="tab-seller">
        <h2>Seller</h2>
        <form id="register-form" class="card">
          <h3>Register with a company</h3>
          <select id="rg-company"></select>
          <div id="rg-min-fee" class="muted"></div>
          <input id="rg-fee" inputmode="numeric" placeholder="registration fee (wei)" required>
          <button type="submit">Register</button>
        </form>
        <form id="buy-form" class="card">
          <h3>Buy</h3>
          <select id="buy-company"></select>
          <select id="buy-product"></select>
          <input id="buy-seller-name" placeholder="seller display name" required>
          <input id="buy-qty" inputmode="numeric" value="1" required>
          <div id="buy-total" class="muted"></div>
          <input id="buy-value" inputmode="numeric" placeholder="value (wei)" required>
          <button type="submit">Buy</button>
        </form>
        <div id="seller-status"></div>
        <h3>Catalog</h3>
        <div id="seller-products"></div>
      </section>

      <section class="tab" id="tab-consumer">
        <h2>Consumer verification</h2>
        <p class="muted">Paste the provenance code from the product's QR label, or scan it.</p>
        <textarea id="verify-input" rows="3" placeholder="pcv1:…"></textarea>
        <div class="row">
          <button id="verify-btn" type="button">Verify</button>
          <button id="scan-btn" type="button" hidden>Scan with camera</button>
          <button id="scan-stop-btn" type="button" hidden>Stop camera</button>
        </div>
        <video id="scan-video" hidden muted playsinline></video>
        <div id="verdict-out"></div>
      </section>

      <section class="tab" id="tab-costs">
        <h2>Operation costs</h2>
        <div id="costs-out"></div>
      </section>
    `;
    this.wire();
    this.showTab("consumer");
    void this.refreshHead();
  }

  private wire(): void {
    this.el("tabs").addEventListener("click", (event) => {
      const tab = (event.target as HTMLElement).dataset?.tab as Tab | undefined;
      if (tab) this.showTab(tab);
    });

    this.el("produce-btn").addEventListener("click", () => {
      void this.guard("session-status", async () => {
        await this.api.produce();
        await this.refreshHead();
        return "";
      });
    });

    this.el("seed-gen-btn").addEventListener("click", () => this.loadKey(SessionKey.generate()));
    this.el("seed-load-btn").addEventListener("click", () => {
      void this.guard("session-status", async () => {
        this.loadKey(SessionKey.fromSeedHex(this.el<HTMLInputElement>("seed-input").value));
        return "";
      });
    });

    this.el("faucet-btn").addEventListener("click", () => {
      void this.guard("session-status", async () => {
        const amount = parseWei(this.el<HTMLInputElement>("faucet-wei").value, "faucet amount");
        const receipt = await this.requireSession().requestFaucet(amount);
        await this.refreshSessionInfo();
        return receiptCard(receipt, "faucet");
      });
    });

    this.el("create-company-form").addEventListener("submit", (event) => {
      event.preventDefault();
      void this.guard("manufacturer-status", async () => {
        const flow = new ManufacturerFlow(this.requireSession());
        const name = this.el<HTMLInputElement>("cc-name").value;
        const minFee = parseWei(this.el<HTMLInputElement>("cc-min-fee").value, "min fee");
        const { receipt, companyAddr } = await flow.createCompany(name, minFee);
        await this.refreshManufacturer();
        return receiptCard(receipt, `company ${companyAddr}`);
      });
    });

    this.el("enroll-form").addEventListener("submit", (event) => {
      event.preventDefault();
      void this.guard("manufacturer-status", async () => {
        const flow = new ManufacturerFlow(this.requireSession());
        const company = this.el<HTMLSelectElement>("en-company").value;
        if (!company) throw new Error("create or select a company first");
        const { receipt, productId } = await flow.enrollProduct(
          company,
          this.el<HTMLInputElement>("en-name").value,
          parseWei(this.el<HTMLInputElement>("en-price").value, "price"),
          parseCount(this.el<HTMLInputElement>("en-stock").value, "stock"),
        );
        await this.refreshManufacturer();
        return receiptCard(receipt, `product #${productId}`);
      });
    });

    this.el("register-form").addEventListener("submit", (event) => {
      event.preventDefault();
      void this.guard("seller-status", async () => {
        const flow = new SellerFlow(this.requireSession());
        const receipt = await flow.register(
          this.el<HTMLSelectElement>("rg-company").value,
          parseWei(this.el<HTMLInputElement>("rg-fee").value, "fee"),
        );
        await this.refreshSeller();
        return receiptCard(receipt, "seller registration");
      });
    });

    this.el("rg-company").addEventListener("change", () => void this.refreshRegisterHint());
    this.el("buy-company").addEventListener("change", () => void this.refreshBuyProducts());
    this.el("buy-product").addEventListener("change", () => void this.refreshBuyTotal());
    this.el("buy-qty").addEventListener("input", () => void this.refreshBuyTotal());

    this.el("buy-form").addEventListener("submit", (event) => {
      event.preventDefault();
      void this.guard("seller-status", async () => {
        const flow = new SellerFlow(this.requireSession());
        const receipt = await flow.buy(
          this.el<HTMLSelectElement>("buy-company").value,
          parseCount(this.el<HTMLSelectElement>("buy-product").value, "product"),
          this.el<HTMLInputElement>("buy-seller-name").value,
          parseCount(this.el<HTMLInputElement>("buy-qty").value, "quantity"),
          parseWei(this.el<HTMLInputElement>("buy-value").value, "value"),
        );
        await this.refreshSeller();
        return receiptCard(receipt, "purchase");
      });
    });

    this.el("verify-btn").addEventListener("click", () => {
      void this.verifyText(this.el<HTMLTextAreaElement>("verify-input").value);
    });

    if (cameraAvailable()) {
      const scanBtn = this.el<HTMLButtonElement>("scan-btn");
      const stopBtn = this.el<HTMLButtonElement>("scan-stop-btn");
      const video = this.el<HTMLVideoElement>("scan-video");
      scanBtn.hidden = false;
      scanBtn.addEventListener("click", () => {
        video.hidden = false;
        stopBtn.hidden = false;
        this.scan = startCameraScan(video);
        this.scan.result
          .then((text) => {
            this.el<HTMLTextAreaElement>("verify-input").value = text;
            this.stopScan();
            return this.verifyText(text);
          })
          .catch((err) => {
            this.stopScan();
            this.setHtml("verdict-out", describeError(err));
          });
      });
      stopBtn.addEventListener("click", () => this.stopScan());
    }
  }

  private stopScan(): void {
    this.scan?.stop();
    this.scan = null;
    this.el<HTMLVideoElement>("scan-video").hidden = true;
    this.el<HTMLButtonElement>("scan-stop-btn").hidden = true;
  }

  /** Run an async action and render its result (or an inline error) into #target. */
  private async guard(target: string, action: () => Promise<string>): Promise<void> {
    try {
      this.setHtml(target, `<span class="muted">working…</span>`);
      this.setHtml(target, await action());
    } catch (err) {
      this.setHtml(target, describeError(err));
    }
  }

  async verifyText(text: string): Promise<void> {
    if (!text.trim()) {
      this.setHtml("verdict-out", errorInline("Empty", "paste a provenance code first"));
      return;
    }
    try {
      this.setHtml("verdict-out", verdictPanel(await verifyPayload(this.api, text)));
    } catch (err) {
      this.setHtml("verdict-out", describeError(err));
    }
  }

  loadKey(key: SessionKey): void {
    this.session = new Session(this.api, key, this.sessionOptions);
    void this.refreshSessionInfo();
    void this.refreshManufacturer();
    void this.refreshSeller();
  }

  showTab(tab: Tab): void {
    for (const t of TABS) {
      this.el(`tab-${t}`).classList.toggle("active", t === tab);
      const btn = this.root.querySelector(`[data-tab="${t}"]`);
      btn?.classList.toggle("active", t === tab);
    }
    if (tab === "costs") void this.refreshCosts();
    if (tab === "seller") void this.refreshSeller();
    if (tab === "manufacturer") void this.refreshManufacturer();
  }

  private async refreshHead(): Promise<void> {
    try {
      const head = await this.api.head();
      this.setHtml(
        "head-info",
        `height ${head.height} · state root ${escapeHtml(head.state_root.slice(0, 18))}…`,
      );
    } catch (err) {
      this.setHtml("head-info", describeError(err));
    }
  }

  private async refreshSessionInfo(): Promise<void> {
    if (!this.session) return;
    const key = this.session.key;
    const account = await this.api.account(key.addressHex);
    this.setHtml(
      "session-info",
      `address <code>${escapeHtml(key.addressHex)}</code> · balance ${formatEth(BigInt(account.balance_wei))} · next nonce ${account.nonce}` +
        ` · public key <code>${escapeHtml(toHex(key.publicKey).slice(0, 18))}…</code>`,
    );
  }

  private fillCompanySelect(id: string, companies: CompanyModel[]): void {
    const select = this.el<HTMLSelectElement>(id);
    const before = select.value;
    select.innerHTML = companies
      .map((c) => `<option value="${escapeHtml(c.contract_address)}">${escapeHtml(c.name)}</option>`)
      .join("");
    if (before && companies.some((c) => c.contract_address === before)) select.value = before;
  }

  private async refreshManufacturer(): Promise<void> {
    const companies = await this.api.companies();
    const mine = this.session
      ? companies.filter((c) => c.manufacturer === this.session?.key.addressHex)
      : [];
    this.fillCompanySelect("en-company", mine);
    this.setHtml("my-companies", mine.length ? mine.map(companyCard).join("") : `<p class="muted">None yet.</p>`);
    const blocks = mine.map(
      (c) =>
        `<h4>${escapeHtml(c.name)}</h4>` +
        productTable(c.products, (p) =>
          p.order_status === "Pending"
            ? `<button type="button" class="ship-btn" data-company="${escapeHtml(c.contract_address)}" data-product="${p.id}">Ship</button>`
            : "",
        ),
    );
    this.setHtml("my-products", blocks.join("") || `<p class="muted">No products.</p>`);
    for (const btn of this.root.querySelectorAll<HTMLButtonElement>(".ship-btn")) {
      btn.addEventListener("click", () => {
        void this.guard("manufacturer-status", async () => {
          const flow = new ManufacturerFlow(this.requireSession());
          const receipt = await flow.ship(btn.dataset.company ?? "", Number(btn.dataset.product));
          await this.refreshManufacturer();
          return receiptCard(receipt, `shipped product #${btn.dataset.product}`);
        });
      });
    }
  }

  private async refreshSeller(): Promise<void> {
    const companies = await this.api.companies();
    this.fillCompanySelect("rg-company", companies);
    this.fillCompanySelect("buy-company", companies);
    await this.refreshRegisterHint();
    await this.refreshBuyProducts();
    this.setHtml(
      "seller-products",
      companies.map((c) => `<h4>${escapeHtml(c.name)}</h4>` + productTable(c.products)).join("") ||
        `<p class="muted">No companies yet.</p>`,
    );
  }

  private async refreshRegisterHint(): Promise<void> {
    const addr = this.el<HTMLSelectElement>("rg-company").value;
    if (!addr) {
      this.setHtml("rg-min-fee", "");
      return;
    }
    const company = await this.api.company(addr);
    this.setHtml("rg-min-fee", `company minimum: ${formatEth(BigInt(company.min_fee_wei))} (${escapeHtml(company.min_fee_wei)} wei)`);
    const feeInput = this.el<HTMLInputElement>("rg-fee");
    if (!feeInput.value) feeInput.value = company.min_fee_wei;
  }

  private async refreshBuyProducts(): Promise<void> {
    const addr = this.el<HTMLSelectElement>("buy-company").value;
    const select = this.el<HTMLSelectElement>("buy-product");
    if (!addr) {
      select.innerHTML = "";
      return;
    }
    const company = await this.api.company(addr);
    const open = company.products.filter((p) => p.status !== "Shipped");
    select.innerHTML = open
      .map((p) => `<option value="${p.id}">#${p.id} ${escapeHtml(p.name)} (${formatEth(BigInt(p.price_wei))})</option>`)
      .join("");
    await this.refreshBuyTotal();
  }

  private async refreshBuyTotal(): Promise<void> {
    const addr = this.el<HTMLSelectElement>("buy-company").value;
    const productRaw = this.el<HTMLSelectElement>("buy-product").value;
    if (!addr || !productRaw) {
      this.setHtml("buy-total", "");
      return;
    }
    try {
      const product = await this.api.product(addr, Number(productRaw));
      const qty = parseCount(this.el<HTMLInputElement>("buy-qty").value || "0", "quantity");
      const total = BigInt(product.price_wei) * BigInt(qty);
      this.setHtml("buy-total", `total: ${qty} × ${formatEth(BigInt(product.price_wei))} = ${formatEth(total)} (${total} wei)`);
      this.el<HTMLInputElement>("buy-value").value = total.toString();
    } catch (err) {
      this.setHtml("buy-total", describeError(err));
    }
  }

  private async refreshCosts(): Promise<void> {
    try {
      this.setHtml("costs-out", costTable(await this.api.costs()));
    } catch (err) {
      this.setHtml("costs-out", describeError(err));
    }
  }
}

export function mount(root: HTMLElement, api: NodeApi, options: SessionOptions = {}): ConsoleApp {
  const app = new ConsoleApp(root, api, options);
  app.render();
  return app;
}

// Browser entry point; tests import mount() instead.
const rootEl = typeof document !== "undefined" ? document.getElementById("app") : null;
if (rootEl) {
  const base = (import.meta as { env?: Record<string, string | undefined> }).env?.VITE_NODE_URL ?? "";
  mount(rootEl, new NodeApi(base));
}
