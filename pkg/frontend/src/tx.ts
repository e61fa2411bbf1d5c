/**
 * Transaction building and client-side signing.
 *
 * The signed preimage is sender(20) | nonce(u64) | action tag(u8) | action
 * fields in declared order | value_wei(u128); the transaction hash is
 * SHA-256 of it. The wire JSON carries binary fields as 0x hex and wei
 * amounts as decimal strings.
 */

import { sha256 } from "@noble/hashes/sha2.js";

import { ByteWriter } from "./codec";
import { toHex } from "./hex";
import type { SessionKey } from "./keys";

export type Action =
  | { type: "CreateCompany"; name: string; minFeeWei: bigint }
  | { type: "EnrollProduct"; company: Uint8Array; name: string; priceWei: bigint; stock: number }
  | { type: "RegisterSeller"; company: Uint8Array }
  | { type: "BuyProduct"; company: Uint8Array; productId: number; sellerName: string; quantity: number }
  | { type: "DistributeProduct"; company: Uint8Array; productId: number }
  | { type: "Transfer"; to: Uint8Array };

const ACTION_TAGS: Record<Action["type"], number> = {
  CreateCompany: 0,
  EnrollProduct: 1,
  RegisterSeller: 2,
  BuyProduct: 3,
  DistributeProduct: 4,
  Transfer: 5,
};

export function encodeAction(w: ByteWriter, action: Action): void {
  w.u8(ACTION_TAGS[action.type]);
  switch (action.type) {
    case "CreateCompany":
      w.string(action.name);
      w.u128(action.minFeeWei);
      break;
    case "EnrollProduct":
      w.address(action.company);
      w.string(action.name);
      w.u128(action.priceWei);
      w.u64(BigInt(action.stock));
      break;
    case "RegisterSeller":
      w.address(action.company);
      break;
    case "BuyProduct":
      w.address(action.company);
      w.u64(BigInt(action.productId));
      w.string(action.sellerName);
      w.u64(BigInt(action.quantity));
      break;
    case "DistributeProduct":
      w.address(action.company);
      w.u64(BigInt(action.productId));
      break;
    case "Transfer":
      w.address(action.to);
      break;
  }
}

export function signingBytes(sender: Uint8Array, nonce: number, action: Action, valueWei: bigint): Uint8Array {
  const w = new ByteWriter();
  w.address(sender);
  w.u64(BigInt(nonce));
  encodeAction(w, action);
  w.u128(valueWei);
  return w.bytes();
}

export function txHash(sender: Uint8Array, nonce: number, action: Action, valueWei: bigint): Uint8Array {
  return sha256(signingBytes(sender, nonce, action, valueWei));
}

/** JSON form of an action as the node's submit endpoint expects it. */
export function actionToWire(action: Action): Record<string, unknown> {
  switch (action.type) {
    case "CreateCompany":
      return { type: "CreateCompany", name: action.name, min_fee_wei: action.minFeeWei.toString() };
    case "EnrollProduct":
      return {
        type: "EnrollProduct",
        company: toHex(action.company),
        name: action.name,
        price_wei: action.priceWei.toString(),
        stock: action.stock,
      };
    case "RegisterSeller":
      return { type: "RegisterSeller", company: toHex(action.company) };
    case "BuyProduct":
      return {
        type: "BuyProduct",
        company: toHex(action.company),
        product_id: action.productId,
        seller_name: action.sellerName,
        quantity: action.quantity,
      };
    case "DistributeProduct":
      return { type: "DistributeProduct", company: toHex(action.company), product_id: action.productId };
    case "Transfer":
      return { type: "Transfer", to: toHex(action.to) };
  }
}

export interface TxSubmitBody {
  sender: string;
  nonce: number;
  action: Record<string, unknown>;
  value_wei: string;
  public_key: string;
  signature: string;
  [key: string]: unknown;
}

/** Sign with the session key and produce the POST /v1/tx body. */
export function buildSignedTx(key: SessionKey, nonce: number, action: Action, valueWei: bigint): TxSubmitBody {
  const preimage = signingBytes(key.address, nonce, action, valueWei);
  return {
    sender: key.addressHex,
    nonce,
    action: actionToWire(action),
    value_wei: valueWei.toString(),
    public_key: toHex(key.publicKey),
    signature: toHex(key.sign(preimage)),
  };
}
