/**
 * Typed client for the node's HTTP/JSON API.
 *
 * The console performs no state computation of its own: every displayed fact
 * comes from these endpoints. Errors arrive in one envelope,
 * {"error": {"code", "message"}}, surfaced here as ApiError.
 */

import type { TxSubmitBody } from "./tx";

export class ApiError extends Error {
  constructor(readonly code: string, message: string, readonly status: number) {
    super(message);
    this.name = "ApiError";
  }
}

export interface BlockSummary {
  height: number;
  block_hash: string;
  prev_hash: string;
  timestamp: number;
  state_root: string;
  tx_count: number;
}

export interface ReceiptModel {
  tx_hash: string;
  height: number;
  success: boolean;
  gas_used: number;
  fee_wei: string;
  error: string | null;
  company: string | null;
  product_id: number | null;
}

export interface BlockDetail extends BlockSummary {
  transactions: Record<string, unknown>[];
  receipts: ReceiptModel[];
}

export interface ProductModel {
  id: number;
  name: string;
  price_wei: string;
  stock: number;
  status: string;
  order_status: string;
  owner_name: string;
  owner_address: string;
}

export interface SellerModel {
  address: string;
  registered: boolean;
}

export interface CompanyModel {
  contract_address: string;
  name: string;
  manufacturer: string;
  min_fee_wei: string;
  sellers: SellerModel[];
  products: ProductModel[];
}

export interface AccountModel {
  address: string;
  balance_wei: string;
  nonce: number;
}

export interface QRPayloadModel {
  version: number;
  company: string;
  product_id: number;
  manufacturer: string;
  owner_address: string;
  owner_name: string;
  status: string;
  order_status: string;
  issued_at_height: number;
  checksum: string;
}

export interface VerdictResponse {
  verdict: string;
  mismatched_fields: string[];
  reason: string | null;
  payload: QRPayloadModel;
}

export interface ValidationModel {
  ok: boolean;
  height: number | null;
  reason: string | null;
}

export interface GasScheduleModel {
  deploy_system: number;
  add_company: number;
  seller_registration: number;
  product_enrollment: number;
  buy_product: number;
  product_distribution: number;
  transfer: number;
  gas_price_wei: string;
}

export interface CostRowModel {
  description: string;
  gas: number;
  fee_eth: string;
  fee_usd: string;
  reference_fee_eth: string;
  reference_fee_usd: string;
  note: string | null;
}

export interface CostReportModel {
  gas_price_wei: string;
  eth_usd_rate: string;
  rows: CostRowModel[];
  totals: { fee_eth: string; fee_usd: string; reference_fee_eth: string; reference_fee_usd: string };
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class NodeApi {
  private readonly fetchFn: FetchLike;

  constructor(readonly baseUrl: string, fetchFn?: FetchLike) {
    this.fetchFn = fetchFn ?? ((input, init) => fetch(input, init));
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchFn(this.baseUrl + path, {
        method,
        headers: body === undefined ? undefined : { "content-type": "application/json" },
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (err) {
      throw new ApiError("Transport", `node unreachable at ${this.baseUrl}: ${String(err)}`, 0);
    }
    const text = await response.text();
    let parsed: unknown = null;
    if (text) {
      try {
        parsed = JSON.parse(text);
      } catch {
        throw new ApiError("BadResponse", `non-JSON response (${response.status})`, response.status);
      }
    }
    if (!response.ok) {
      const detail = (parsed as { error?: { code?: string; message?: string } } | null)?.error;
      throw new ApiError(detail?.code ?? "HTTPError", detail?.message ?? `HTTP ${response.status}`, response.status);
    }
    return parsed as T;
  }

  submitTx(body: TxSubmitBody): Promise<{ tx_hash: string }> {
    return this.request("POST", "/v1/tx", body);
  }

  produce(): Promise<BlockSummary> {
    return this.request("POST", "/v1/blocks/produce");
  }

  head(): Promise<BlockSummary> {
    return this.request("GET", "/v1/chain/head");
  }

  validateChain(): Promise<ValidationModel> {
    return this.request("GET", "/v1/chain/validate");
  }

  block(height: number): Promise<BlockDetail> {
    return this.request("GET", `/v1/blocks/${height}`);
  }

  receipt(txHash: string): Promise<ReceiptModel> {
    return this.request("GET", `/v1/receipts/${txHash}`);
  }

  companies(): Promise<CompanyModel[]> {
    return this.request("GET", "/v1/companies");
  }

  company(addr: string): Promise<CompanyModel> {
    return this.request("GET", `/v1/companies/${addr}`);
  }

  product(addr: string, productId: number): Promise<ProductModel> {
    return this.request("GET", `/v1/companies/${addr}/products/${productId}`);
  }

  qrText(addr: string, productId: number): Promise<{ payload: string }> {
    return this.request("GET", `/v1/companies/${addr}/products/${productId}/qr`);
  }

  account(addr: string): Promise<AccountModel> {
    return this.request("GET", `/v1/accounts/${addr}`);
  }

  verifyQr(payload: string): Promise<VerdictResponse> {
    return this.request("POST", "/v1/qr/verify", { payload });
  }

  faucet(address: string, amountWei: bigint): Promise<{ tx_hash: string }> {
    return this.request("POST", "/v1/faucet", { address, amount_wei: amountWei.toString() });
  }

  costs(): Promise<CostReportModel> {
    return this.request("GET", "/v1/costs");
  }

  gasSchedule(): Promise<GasScheduleModel> {
    return this.request("GET", "/v1/gas-schedule");
  }
}
