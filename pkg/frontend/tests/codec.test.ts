/**
 * Byte-level parity with the node: pinned vectors for key derivation, the
 * transaction preimage, hashing, deterministic signatures, and the wire JSON.
 * The pinned hex strings were produced by the node implementation; if any of
 * these drift, server-side signature checks would reject console submissions.
 */

import nacl from "tweetnacl";
import { describe, expect, it } from "vitest";

import { ByteWriter, CodecError } from "../src/codec";
import { bytesEqual, fromHex, seedFromHex, toHex } from "../src/hex";
import { SessionKey, deriveAddress } from "../src/keys";
import { SCENARIO, scenarioKeys } from "../src/scenario";
import { actionToWire, buildSignedTx, signingBytes, txHash } from "../src/tx";
import type { Action } from "../src/tx";

const SEED01 = "01".repeat(32);
const SEED01_PUBKEY = "0x8a88e3dd7409f195fd52db2d3cba5d72ca6709bf1d94121bf3748801b40f6f5c";
const SEED01_ADDRESS = "0x34750f98bd59fcfc946da45aaabe933be154a4b5";
const ZERO_PUBKEY_ADDRESS = "0x66687aadf862bd776c8fc18b8e9f8e2008971485";

// RegisterSeller(company=100..119) from sender 0..19, nonce 7, value 123456789.
const REGISTER_PREIMAGE =
  "0x000102030405060708090a0b0c0d0e0f10111213" +
  "0000000000000007" +
  "02" +
  "6465666768696a6b6c6d6e6f7071727374757677" +
  "000000000000000000000000075bcd15";
const REGISTER_TX_HASH = "0xbf56e978f806b01f4d3ac34d5a836df2a987b09153e680b15f19f9ac5ec6a92d";

const CREATE_PREIMAGE =
  "0x34750f98bd59fcfc946da45aaabe933be154a4b5" +
  "0000000000000000" +
  "00" +
  "0012" +
  "4175726f726120456c656374726f6e696373" +
  "000000000000000000b1a2bc2ec50000" +
  "00000000000000000000000000000000";
const CREATE_TX_HASH = "0xd64a1b96a8b313736663ffa2327dcf26c68555f09a39aae290c683d9ccdd8cb2";
const CREATE_SIGNATURE =
  "0xc44868115b687de9255bf1d51991f65782fd1b70243be9d2156653943656ed20" +
  "4c47fe1e74dbdccd12e3bc22f656f2315c08f2d482e12088f43875640c24ba03";

const registerAction: Action = {
  type: "RegisterSeller",
  company: Uint8Array.from({ length: 20 }, (_, i) => 100 + i),
};
const registerSender = Uint8Array.from({ length: 20 }, (_, i) => i);

describe("hex", () => {
  it("round-trips bytes", () => {
    const raw = Uint8Array.from([0, 1, 0xab, 0xff]);
    expect(toHex(raw)).toBe("0x0001abff");
    expect(fromHex("0x0001abff")).toEqual(raw);
  });

  it("rejects non-canonical text", () => {
    expect(() => fromHex("0001abff")).toThrow(/hex/);
    expect(() => fromHex("0x0001ABFF")).toThrow(/hex/);
    expect(() => fromHex("0x012")).toThrow(/hex/);
    expect(() => fromHex("0x0001", 3)).toThrow(/3 bytes/);
  });

  it("accepts seeds with or without the 0x prefix", () => {
    expect(seedFromHex(SEED01)).toEqual(seedFromHex("0x" + SEED01));
    expect(() => seedFromHex("01")).toThrow(/32 bytes|hex/);
  });
});

describe("canonical writer", () => {
  it("encodes integers big-endian at fixed width", () => {
    const w = new ByteWriter();
    w.u8(0xab);
    w.u64(7n);
    w.u128(123456789n);
    expect(toHex(w.bytes())).toBe("0xab" + "0000000000000007" + "000000000000000000000000075bcd15");
  });

  it("length-prefixes UTF-8 strings with u16", () => {
    const w = new ByteWriter();
    w.string("abc");
    expect(toHex(w.bytes())).toBe("0x0003616263");
    const accents = new ByteWriter();
    accents.string("é");
    expect(toHex(accents.bytes())).toBe("0x0002c3a9");
  });

  it("rejects out-of-range values", () => {
    expect(() => new ByteWriter().u8(256)).toThrow(CodecError);
    expect(() => new ByteWriter().u64(-1n)).toThrow(CodecError);
    expect(() => new ByteWriter().u64(1n << 64n)).toThrow(CodecError);
    expect(() => new ByteWriter().u128(1n << 128n)).toThrow(CodecError);
    expect(() => new ByteWriter().address(new Uint8Array(19))).toThrow(CodecError);
    expect(() => new ByteWriter().string("x".repeat(257))).toThrow(CodecError);
  });

  it("caps strings at 256 UTF-8 bytes, not characters", () => {
    const twoBytesEach = "é".repeat(128); // exactly 256 bytes
    const w = new ByteWriter();
    w.string(twoBytesEach);
    expect(w.bytes().length).toBe(2 + 256);
    expect(() => new ByteWriter().string("é".repeat(129))).toThrow(CodecError);
  });
});

describe("session keys", () => {
  it("derives the pinned public key and address from a fixed seed", () => {
    const key = SessionKey.fromSeedHex(SEED01);
    expect(toHex(key.publicKey)).toBe(SEED01_PUBKEY);
    expect(key.addressHex).toBe(SEED01_ADDRESS);
  });

  it("address is the first 20 bytes of SHA-256 of the public key", () => {
    expect(toHex(deriveAddress(new Uint8Array(32)))).toBe(ZERO_PUBKEY_ADDRESS);
  });

  it("generates distinct 32-byte seeds", () => {
    const a = SessionKey.generate();
    const b = SessionKey.generate();
    expect(a.seed.length).toBe(32);
    expect(bytesEqual(a.seed, b.seed)).toBe(false);
  });
});

describe("transaction preimage", () => {
  it("matches the pinned RegisterSeller vector", () => {
    const preimage = signingBytes(registerSender, 7, registerAction, 123456789n);
    expect(toHex(preimage)).toBe(REGISTER_PREIMAGE);
    expect(toHex(txHash(registerSender, 7, registerAction, 123456789n))).toBe(REGISTER_TX_HASH);
  });

  it("matches the pinned CreateCompany vector and deterministic signature", () => {
    const key = SessionKey.fromSeedHex(SEED01);
    const action: Action = { type: "CreateCompany", name: SCENARIO.companyName, minFeeWei: SCENARIO.minFeeWei };
    const preimage = signingBytes(key.address, 0, action, 0n);
    expect(toHex(preimage)).toBe(CREATE_PREIMAGE);
    expect(toHex(txHash(key.address, 0, action, 0n))).toBe(CREATE_TX_HASH);
    const signature = key.sign(preimage);
    expect(toHex(signature)).toBe(CREATE_SIGNATURE);
    expect(nacl.sign.detached.verify(preimage, signature, key.publicKey)).toBe(true);
  });

  it("every action type encodes with its declared tag", () => {
    const company = Uint8Array.from({ length: 20 }, () => 1);
    const cases: [Action, number][] = [
      [{ type: "CreateCompany", name: "a", minFeeWei: 1n }, 0],
      [{ type: "EnrollProduct", company, name: "a", priceWei: 1n, stock: 1 }, 1],
      [{ type: "RegisterSeller", company }, 2],
      [{ type: "BuyProduct", company, productId: 1, sellerName: "a", quantity: 1 }, 3],
      [{ type: "DistributeProduct", company, productId: 1 }, 4],
      [{ type: "Transfer", to: company }, 5],
    ];
    for (const [action, tag] of cases) {
      const bytes = signingBytes(company, 0, action, 0n);
      expect(bytes[28]).toBe(tag); // after sender(20) + nonce(8)
    }
  });
});

describe("wire JSON", () => {
  it("buildSignedTx emits the exact submit body shape", () => {
    const key = SessionKey.fromSeedHex(SEED01);
    const action: Action = { type: "RegisterSeller", company: registerAction.company };
    const body = buildSignedTx(key, 3, action, 42n);
    expect(Object.keys(body).sort()).toEqual(["action", "nonce", "public_key", "sender", "signature", "value_wei"]);
    expect(body.sender).toBe(SEED01_ADDRESS);
    expect(body.nonce).toBe(3);
    expect(body.value_wei).toBe("42");
    expect(body.public_key).toBe(SEED01_PUBKEY);
    expect(fromHex(body.signature, 64)).toBeInstanceOf(Uint8Array);
    const preimage = signingBytes(key.address, 3, action, 42n);
    expect(nacl.sign.detached.verify(preimage, fromHex(body.signature), key.publicKey)).toBe(true);
  });

  it("serializes each action with wei amounts as decimal strings", () => {
    const company = Uint8Array.from({ length: 20 }, (_, i) => i);
    expect(actionToWire({ type: "CreateCompany", name: "n", minFeeWei: 10n ** 20n })).toEqual({
      type: "CreateCompany",
      name: "n",
      min_fee_wei: "100000000000000000000",
    });
    expect(actionToWire({ type: "EnrollProduct", company, name: "p", priceWei: 5n, stock: 9 })).toEqual({
      type: "EnrollProduct",
      company: toHex(company),
      name: "p",
      price_wei: "5",
      stock: 9,
    });
    expect(actionToWire({ type: "BuyProduct", company, productId: 2, sellerName: "s", quantity: 3 })).toEqual({
      type: "BuyProduct",
      company: toHex(company),
      product_id: 2,
      seller_name: "s",
      quantity: 3,
    });
    expect(actionToWire({ type: "DistributeProduct", company, productId: 2 })).toEqual({
      type: "DistributeProduct",
      company: toHex(company),
      product_id: 2,
    });
    expect(actionToWire({ type: "Transfer", to: company })).toEqual({ type: "Transfer", to: toHex(company) });
  });
});

describe("scenario key derivation", () => {
  it("manufacturer from the seed, seller from its SHA-256 (pinned addresses)", () => {
    const { manufacturer, seller } = scenarioKeys("2a".repeat(32));
    expect(manufacturer.addressHex).toBe("0xb600306cfa76723fdec395e53a9b3d9fdb78b1e2");
    expect(seller.addressHex).toBe("0x4f6deef516da9486b78f6fb40eb1cfb2e05e96a4");
  });
});
