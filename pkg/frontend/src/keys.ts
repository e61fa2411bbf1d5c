/**
 * In-browser session keys.
 *
 * A session key is an Ed25519 seed held in memory only; signing happens
 * client-side and neither the seed nor the secret key is ever transmitted.
 * Addresses are the first 20 bytes of SHA-256 of the public key, matching
 * the node.
 */

import nacl from "tweetnacl";
import { sha256 } from "@noble/hashes/sha2.js";

import { ADDRESS_LEN } from "./codec";
import { seedFromHex, toHex } from "./hex";

export function deriveAddress(publicKey: Uint8Array): Uint8Array {
  if (publicKey.length !== 32) throw new Error(`public key must be 32 bytes, got ${publicKey.length}`);
  return sha256(publicKey).slice(0, ADDRESS_LEN);
}

export class SessionKey {
  readonly publicKey: Uint8Array;
  readonly address: Uint8Array;
  readonly addressHex: string;
  private readonly secretKey: Uint8Array;

  private constructor(readonly seed: Uint8Array) {
    const pair = nacl.sign.keyPair.fromSeed(seed);
    this.publicKey = pair.publicKey;
    this.secretKey = pair.secretKey;
    this.address = deriveAddress(this.publicKey);
    this.addressHex = toHex(this.address);
  }

  static fromSeed(seed: Uint8Array): SessionKey {
    if (seed.length !== 32) throw new Error(`seed must be 32 bytes, got ${seed.length}`);
    return new SessionKey(Uint8Array.from(seed));
  }

  static fromSeedHex(text: string): SessionKey {
    return new SessionKey(seedFromHex(text));
  }

  static generate(): SessionKey {
    const seed = new Uint8Array(32);
    crypto.getRandomValues(seed);
    return new SessionKey(seed);
  }

  sign(message: Uint8Array): Uint8Array {
    return nacl.sign.detached(message, this.secretKey);
  }
}
