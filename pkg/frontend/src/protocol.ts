/**
 * Framed stdio protocol to the simulation binding endpoint (API v1).
 *
 * Frame layout: u32be header length, UTF-8 JSON header, u64be payload
 * length, raw payload. Payloads are little-endian float64 arrays, so every
 * numeric value crosses the process boundary bit for bit.
 */
import { ChildProcess } from "node:child_process";

export interface FrameHeader {
  ok?: boolean;
  error?: string;
  [key: string]: unknown;
}

export interface Frame {
  header: FrameHeader;
  payload: Buffer;
}

export function encodeFrame(header: object, payload: Buffer = Buffer.alloc(0)): Buffer {
  const head = Buffer.from(JSON.stringify(header), "utf-8");
  const out = Buffer.alloc(4 + head.length + 8 + payload.length);
  out.writeUInt32BE(head.length, 0);
  head.copy(out, 4);
  out.writeBigUInt64BE(BigInt(payload.length), 4 + head.length);
  payload.copy(out, 4 + head.length + 8);
  return out;
}

/** Accumulates stdout chunks and hands out complete frames in order. */
export class FrameReader {
  private buffer: Buffer = Buffer.alloc(0);
  private waiters: Array<{
    resolve: (frame: Frame) => void;
    reject: (err: Error) => void;
  }> = [];
  private ended = false;

  constructor(stream: NodeJS.ReadableStream) {
    stream.on("data", (chunk: Buffer) => {
      this.buffer = Buffer.concat([this.buffer, chunk]);
      this.drain();
    });
    stream.on("end", () => {
      this.ended = true;
      this.failWaiters(new Error("binding endpoint closed the stream"));
    });
    stream.on("error", (err: Error) => {
      this.ended = true;
      this.failWaiters(err);
    });
  }

  private failWaiters(err: Error): void {
    for (const w of this.waiters.splice(0)) {
      w.reject(err);
    }
  }

  private tryParse(): Frame | null {
    if (this.buffer.length < 4) return null;
    const headerLen = this.buffer.readUInt32BE(0);
    if (this.buffer.length < 4 + headerLen + 8) return null;
    const header = JSON.parse(this.buffer.subarray(4, 4 + headerLen).toString("utf-8"));
    const payloadLen = Number(this.buffer.readBigUInt64BE(4 + headerLen));
    const total = 4 + headerLen + 8 + payloadLen;
    if (this.buffer.length < total) return null;
    const payload = Buffer.from(this.buffer.subarray(4 + headerLen + 8, total));
    this.buffer = this.buffer.subarray(total);
    return { header, payload };
  }

  private drain(): void {
    while (this.waiters.length > 0) {
      const frame = this.tryParse();
      if (frame === null) return;
      this.waiters.shift()!.resolve(frame);
    }
  }

  next(): Promise<Frame> {
    const immediate = this.waiters.length === 0 ? this.tryParse() : null;
    if (immediate !== null) return Promise.resolve(immediate);
    if (this.ended) return Promise.reject(new Error("binding endpoint closed the stream"));
    return new Promise((resolve, reject) => {
      this.waiters.push({ resolve, reject });
      this.drain();
    });
  }
}

export async function roundTrip(
  proc: ChildProcess,
  reader: FrameReader,
  header: object,
  payload: Buffer = Buffer.alloc(0),
): Promise<Frame> {
  proc.stdin!.write(encodeFrame(header, payload));
  const frame = await reader.next();
  if (frame.header.ok === false) {
    throw new Error(String(frame.header.error ?? "binding endpoint reported an error"));
  }
  return frame;
}

export function toFloat64(payload: Buffer): Float64Array {
  // copy to an aligned buffer; Buffer views may start at arbitrary offsets
  const aligned = new ArrayBuffer(payload.length);
  new Uint8Array(aligned).set(payload);
  return new Float64Array(aligned);
}
