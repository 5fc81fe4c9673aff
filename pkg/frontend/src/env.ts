/**
 * EnvHandle: a batched multi-agent driving environment living in a child
 * process, driven through the framed binding protocol.
 *
 * Arrays carry an explicit shape next to a flat Float64Array in C order.
 * A handle is single-user: one outstanding request at a time. After close()
 * every operation fails cleanly.
 */
import { ChildProcess, spawn } from "node:child_process";

import { Frame, FrameReader, roundTrip, toFloat64 } from "./protocol.js";

export interface NdArray {
  data: Float64Array;
  shape: number[];
}

export interface LayoutBlock {
  name: string;
  offset: number;
  length: number;
}

export interface LayoutDescriptor {
  variant: string;
  blocks: LayoutBlock[];
}

export interface EnvOptions {
  /** Interpreter used to host the environment (default: python3, or $LANESIM_PYTHON). */
  python?: string;
}

export interface StepResult {
  observations: NdArray; // (batch, agents, obs_len)
  rewards: NdArray; //      (batch, agents)
  /** agent-agent and agent-lane collision flags as 0/1, (batch, agents, 2) */
  flags: NdArray;
  /** 1 where the agent was re-seeded this step, (batch, agents) */
  resets: NdArray;
}

function product(shape: number[]): number {
  return shape.reduce((a, b) => a * b, 1);
}

export class EnvHandle {
  private proc: ChildProcess;
  private reader: FrameReader;
  private closed = false;

  readonly apiVersion: number;
  readonly layout: LayoutDescriptor;
  readonly numAgents: number;
  readonly batchSize: number;
  readonly obsLen: number;

  private constructor(proc: ChildProcess, reader: FrameReader, init: Frame) {
    this.proc = proc;
    this.reader = reader;
    this.apiVersion = init.header.api_version as number;
    this.layout = init.header.layout as LayoutDescriptor;
    this.numAgents = init.header.num_agents as number;
    this.batchSize = init.header.batch_size as number;
    this.obsLen = init.header.obs_len as number;
  }

  /** Spawn the endpoint and initialize an environment from config fields. */
  static async open(config: object, options: EnvOptions = {}): Promise<EnvHandle> {
    const python = options.python ?? process.env.LANESIM_PYTHON ?? "python3";
    const proc = spawn(python, ["-m", "lanesim.bindserver"], {
      stdio: ["pipe", "pipe", "inherit"],
    });
    const reader = new FrameReader(proc.stdout!);
    const init = await roundTrip(proc, reader, { op: "init", config });
    if ((init.header.api_version as number) !== 1) {
      throw new Error(`unsupported binding API version ${init.header.api_version}`);
    }
    return new EnvHandle(proc, reader, init);
  }

  private assertOpen(): void {
    if (this.closed) {
      throw new Error("environment handle is closed");
    }
  }

  /** Reset every batch instance; instance e is seeded seed + e. */
  async reset(seed: number): Promise<NdArray> {
    this.assertOpen();
    const frame = await roundTrip(this.proc, this.reader, { op: "reset", seed });
    const shape = frame.header.shape as number[];
    return { data: toFloat64(frame.payload), shape };
  }

  /** Step all instances with actions shaped (batch, agents, 2). */
  async step(actions: NdArray): Promise<StepResult> {
    this.assertOpen();
    const expected = [this.batchSize, this.numAgents, 2];
    if (
      actions.shape.length !== 3 ||
      actions.shape.some((d, i) => d !== expected[i]) ||
      actions.data.length !== product(expected)
    ) {
      throw new Error(
        `expected actions of shape (${expected.join(", ")}), got (${actions.shape.join(", ")})`,
      );
    }
    const payload = Buffer.from(actions.data.buffer, actions.data.byteOffset, actions.data.byteLength);
    const frame = await roundTrip(this.proc, this.reader, { op: "step" }, payload);
    const data = toFloat64(frame.payload);
    const e = this.batchSize;
    const n = this.numAgents;
    const obsCount = e * n * this.obsLen;
    let at = 0;
    const take = (count: number, shape: number[]): NdArray => {
      const slice = data.subarray(at, at + count);
      at += count;
      return { data: new Float64Array(slice), shape };
    };
    return {
      observations: take(obsCount, [e, n, this.obsLen]),
      rewards: take(e * n, [e, n]),
      flags: take(e * n * 2, [e, n, 2]),
      resets: take(e * n, [e, n]),
    };
  }

  /** End-of-step agent states: x, y, yaw, v per agent, (batch, agents, 4). */
  async state(): Promise<NdArray> {
    this.assertOpen();
    const frame = await roundTrip(this.proc, this.reader, { op: "state" });
    return { data: toFloat64(frame.payload), shape: frame.header.shape as number[] };
  }

  async close(): Promise<void> {
    if (this.closed) return;
    this.closed = true;
    try {
      await roundTrip(this.proc, this.reader, { op: "close" });
    } finally {
      this.proc.stdin!.end();
    }
  }
}
