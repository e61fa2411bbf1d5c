/**
 * Canonical byte encoding for transaction preimages.
 *
 * Mirrors the node's codec exactly: integers big-endian fixed width, strings
 * u16-length-prefixed UTF-8 capped at 256 bytes, addresses raw 20 bytes. The
 * console only ever encodes (the node decodes and validates), but encoding
 * must be byte-identical or signatures will not verify server-side.
 */

export const ADDRESS_LEN = 20;
export const MAX_STRING_BYTES = 256;

export const U64_MAX = (1n << 64n) - 1n;
export const U128_MAX = (1n << 128n) - 1n;

export class CodecError extends Error {
  constructor(readonly code: string, message: string) {
    super(message);
    this.name = "CodecError";
  }
}

const utf8 = new TextEncoder();

export class ByteWriter {
  private buf: number[] = [];

  u8(value: number): void {
    if (!Number.isInteger(value) || value < 0 || value > 0xff) {
      throw new CodecError("ValueOutOfRange", `u8 out of range: ${value}`);
    }
    this.buf.push(value);
  }

  u64(value: bigint): void {
    this.uint(value, 8n, U64_MAX, "u64");
  }

  u128(value: bigint): void {
    this.uint(value, 16n, U128_MAX, "u128");
  }

  private uint(value: bigint, width: bigint, max: bigint, label: string): void {
    if (value < 0n || value > max) {
      throw new CodecError("ValueOutOfRange", `${label} out of range: ${value}`);
    }
    for (let shift = 8n * (width - 1n); shift >= 0n; shift -= 8n) {
      this.buf.push(Number((value >> shift) & 0xffn));
    }
  }

  fixed(value: Uint8Array, length: number): void {
    if (value.length !== length) {
      throw new CodecError("ValueOutOfRange", `expected ${length} bytes, got ${value.length}`);
    }
    for (const b of value) this.buf.push(b);
  }

  address(value: Uint8Array): void {
    this.fixed(value, ADDRESS_LEN);
  }

  string(value: string): void {
    const raw = utf8.encode(value);
    if (raw.length > MAX_STRING_BYTES) {
      throw new CodecError("FieldTooLong", `string field is ${raw.length} bytes, max ${MAX_STRING_BYTES}`);
    }
    this.buf.push(raw.length >> 8, raw.length & 0xff);
    for (const b of raw) this.buf.push(b);
  }

  bytes(): Uint8Array {
    return Uint8Array.from(this.buf);
  }
}
