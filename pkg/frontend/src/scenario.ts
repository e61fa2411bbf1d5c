/**
 * The demonstration lifecycle, executed through the console's own flows.
 *
 * Constants and key derivation match the CLI's scripted scenario exactly
 * (manufacturer key from the seed, seller key from SHA-256 of that seed), so
 * a console run and a CLI run against fresh nodes land on the same final
 * state root.
 */

import { sha256 } from "@noble/hashes/sha2.js";

import type { NodeApi, VerdictResponse } from "./api";
import { ManufacturerFlow, SellerFlow, Session, verifyPayload } from "./flows";
import type { VerifyOutcome } from "./flows";
import { SessionKey } from "./keys";
import { seedFromHex } from "./hex";

export const SCENARIO = {
  companyName: "Aurora Electronics",
  minFeeWei: 50_000_000_000_000_000n, // 0.05 ETH
  productName: "Quantum Speaker",
  priceWei: 100_000_000_000_000_000n, // 0.1 ETH
  stock: 5,
  sellerName: "North Star Retail",
  quantity: 2,
  faucetWei: 10n * 10n ** 18n,
} as const;

export function scenarioKeys(seedHex: string): { manufacturer: SessionKey; seller: SessionKey } {
  const manufacturer = SessionKey.fromSeed(seedFromHex(seedHex));
  return { manufacturer, seller: SessionKey.fromSeed(sha256(manufacturer.seed)) };
}

export interface ScenarioResult {
  companyAddr: string;
  productId: number;
  preShip: VerifyOutcome;
  verdict: VerdictResponse;
  payloadText: string;
  stateRoot: string;
}

/** Manufacturer, seller, and consumer flows end to end; returns the head state root. */
export async function runConsoleScenario(api: NodeApi, seedHex: string): Promise<ScenarioResult> {
  const { manufacturer, seller } = scenarioKeys(seedHex);
  const options = { produceAfterSubmit: true };
  const manufacturerFlow = new ManufacturerFlow(new Session(api, manufacturer, options));
  const sellerFlow = new SellerFlow(new Session(api, seller, options));

  await manufacturerFlow.session.requestFaucet(SCENARIO.faucetWei);
  await sellerFlow.session.requestFaucet(SCENARIO.faucetWei);

  const { companyAddr } = await manufacturerFlow.createCompany(SCENARIO.companyName, SCENARIO.minFeeWei);
  const { productId } = await manufacturerFlow.enrollProduct(
    companyAddr,
    SCENARIO.productName,
    SCENARIO.priceWei,
    SCENARIO.stock,
  );

  await sellerFlow.register(companyAddr, SCENARIO.minFeeWei);
  await sellerFlow.buy(
    companyAddr,
    productId,
    SCENARIO.sellerName,
    SCENARIO.quantity,
    SCENARIO.priceWei * BigInt(SCENARIO.quantity),
  );

  const preShip = await verifyPayload(api, (await api.qrText(companyAddr, productId)).payload);

  await manufacturerFlow.ship(companyAddr, productId);

  const payloadText = (await api.qrText(companyAddr, productId)).payload;
  const outcome = await verifyPayload(api, payloadText);
  if (outcome.kind !== "verdict") throw new Error(`scenario payload failed to decode: ${outcome.code}`);

  const head = await api.head();
  return {
    companyAddr,
    productId,
    preShip,
    verdict: outcome.result,
    payloadText,
    stateRoot: head.state_root,
  };
}
