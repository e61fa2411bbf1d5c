/**
 * Role flows: the operations behind the dashboard buttons.
 *
 * Each flow signs with the session key, submits over the API, and waits for
 * the receipt. Signing is serialized per session (one transaction in flight
 * at a time) so nonce projection from the node stays race-free.
 */

import { ApiError, NodeApi } from "./api";
import type { ProductModel, ReceiptModel, VerdictResponse } from "./api";
import { fromHex } from "./hex";
import { buildSignedTx } from "./tx";
import type { Action } from "./tx";
import type { SessionKey } from "./keys";

const RECEIPT_POLL_MS = 50;

export interface SessionOptions {
  /** Ask the node for a block after each submit (single-producer dev mode). */
  produceAfterSubmit?: boolean;
  /** How long to wait for a receipt before giving up. */
  receiptTimeoutMs?: number;
}

const sleep = (ms: number) => new Promise<void>((resolve) => setTimeout(resolve, ms));

/** A signed-in identity: session key + node connection. */
export class Session {
  private chain: Promise<unknown> = Promise.resolve();

  constructor(
    readonly api: NodeApi,
    readonly key: SessionKey,
    readonly options: SessionOptions = {},
  ) {}

  /** Sign, submit, and wait for the receipt; rejects with ApiError on refusal. */
  send(action: Action, valueWei = 0n): Promise<ReceiptModel> {
    const run = this.chain.then(
      () => this.sendNow(action, valueWei),
      () => this.sendNow(action, valueWei),
    );
    this.chain = run.catch(() => undefined);
    return run;
  }

  private async sendNow(action: Action, valueWei: bigint): Promise<ReceiptModel> {
    const account = await this.api.account(this.key.addressHex);
    const body = buildSignedTx(this.key, account.nonce, action, valueWei);
    const { tx_hash } = await this.api.submitTx(body);
    if (this.options.produceAfterSubmit) await this.api.produce();
    return this.waitForReceipt(tx_hash);
  }

  async waitForReceipt(txHash: string): Promise<ReceiptModel> {
    const deadline = Date.now() + (this.options.receiptTimeoutMs ?? 10_000);
    for (;;) {
      try {
        return await this.api.receipt(txHash);
      } catch (err) {
        if (!(err instanceof ApiError) || err.code !== "NotFound" || Date.now() >= deadline) throw err;
      }
      await sleep(RECEIPT_POLL_MS);
    }
  }

  async balanceWei(): Promise<bigint> {
    return BigInt((await this.api.account(this.key.addressHex)).balance_wei);
  }

  /** Producer-funded transfer to this session's address. */
  async requestFaucet(amountWei: bigint): Promise<ReceiptModel> {
    const { tx_hash } = await this.api.faucet(this.key.addressHex, amountWei);
    if (this.options.produceAfterSubmit) await this.api.produce();
    return this.waitForReceipt(tx_hash);
  }
}

/** Manufacturer operations: create companies, enroll stock, ship orders. */
export class ManufacturerFlow {
  constructor(readonly session: Session) {}

  async createCompany(name: string, minFeeWei: bigint): Promise<{ receipt: ReceiptModel; companyAddr: string }> {
    const receipt = await this.session.send({ type: "CreateCompany", name, minFeeWei });
    if (!receipt.success || receipt.company === null) {
      throw new ApiError(receipt.error ?? "Failed", "company creation failed", 0);
    }
    return { receipt, companyAddr: receipt.company };
  }

  async enrollProduct(
    companyAddr: string,
    name: string,
    priceWei: bigint,
    stock: number,
  ): Promise<{ receipt: ReceiptModel; productId: number }> {
    const receipt = await this.session.send({
      type: "EnrollProduct",
      company: fromHex(companyAddr, 20),
      name,
      priceWei,
      stock,
    });
    if (!receipt.success || receipt.product_id === null) {
      throw new ApiError(receipt.error ?? "Failed", "product enrollment failed", 0);
    }
    return { receipt, productId: receipt.product_id };
  }

  async ship(companyAddr: string, productId: number): Promise<ReceiptModel> {
    const receipt = await this.session.send({
      type: "DistributeProduct",
      company: fromHex(companyAddr, 20),
      productId,
    });
    if (!receipt.success) throw new ApiError(receipt.error ?? "Failed", "distribution failed", 0);
    return receipt;
  }

  async pendingOrders(companyAddr: string): Promise<ProductModel[]> {
    const company = await this.session.api.company(companyAddr);
    return company.products.filter((p) => p.order_status === "Pending");
  }
}

/** Seller operations: register with a company, then buy its products. */
export class SellerFlow {
  constructor(readonly session: Session) {}

  async register(companyAddr: string, feeWei: bigint): Promise<ReceiptModel> {
    const receipt = await this.session.send({ type: "RegisterSeller", company: fromHex(companyAddr, 20) }, feeWei);
    if (!receipt.success) throw new ApiError(receipt.error ?? "Failed", "registration failed", 0);
    return receipt;
  }

  async buy(
    companyAddr: string,
    productId: number,
    sellerName: string,
    quantity: number,
    valueWei: bigint,
  ): Promise<ReceiptModel> {
    const receipt = await this.session.send(
      { type: "BuyProduct", company: fromHex(companyAddr, 20), productId, sellerName, quantity },
      valueWei,
    );
    if (!receipt.success) throw new ApiError(receipt.error ?? "Failed", "purchase failed", 0);
    return receipt;
  }
}

/** Outcome of a consumer verification: a chain verdict or an undecodable code. */
export type VerifyOutcome =
  | { kind: "verdict"; result: VerdictResponse }
  | { kind: "invalid"; code: string; message: string };

/** Consumer verification needs no key: paste or scan, ask the node. */
export async function verifyPayload(api: NodeApi, payloadText: string): Promise<VerifyOutcome> {
  try {
    return { kind: "verdict", result: await api.verifyQr(payloadText.trim()) };
  } catch (err) {
    if (err instanceof ApiError && err.status === 400) {
      return { kind: "invalid", code: err.code, message: err.message };
    }
    throw err;
  }
}
