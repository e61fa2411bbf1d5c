/** Byte/hex helpers. Chain identifiers travel as 0x-prefixed lowercase hex. */

const HEX_RE = /^0x[0-9a-f]*$/;

export function toHex(bytes: Uint8Array): string {
  let out = "0x";
  for (const b of bytes) out += b.toString(16).padStart(2, "0");
  return out;
}

/** Strict inverse of toHex: lowercase, 0x-prefixed, even length. */
export function fromHex(text: string, expectedLen?: number): Uint8Array {
  if (!HEX_RE.test(text) || text.length % 2 !== 0) {
    throw new Error(`not 0x-prefixed lowercase hex: ${JSON.stringify(text)}`);
  }
  const raw = new Uint8Array((text.length - 2) / 2);
  for (let i = 0; i < raw.length; i++) {
    raw[i] = parseInt(text.slice(2 + 2 * i, 4 + 2 * i), 16);
  }
  if (expectedLen !== undefined && raw.length !== expectedLen) {
    throw new Error(`expected ${expectedLen} bytes, got ${raw.length}`);
  }
  return raw;
}

/** Hex without the 0x prefix (key seeds are entered bare or prefixed). */
export function seedFromHex(text: string): Uint8Array {
  const normalized = text.trim().toLowerCase();
  return fromHex(normalized.startsWith("0x") ? normalized : "0x" + normalized, 32);
}

export function bytesEqual(a: Uint8Array, b: Uint8Array): boolean {
  if (a.length !== b.length) return false;
  for (let i = 0; i < a.length; i++) if (a[i] !== b[i]) return false;
  return true;
}

export function concatBytes(...parts: Uint8Array[]): Uint8Array {
  const out = new Uint8Array(parts.reduce((n, p) => n + p.length, 0));
  let at = 0;
  for (const p of parts) {
    out.set(p, at);
    at += p.length;
  }
  return out;
}
