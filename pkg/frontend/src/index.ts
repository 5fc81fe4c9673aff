export { EnvHandle } from "./env.js";
export type { EnvOptions, LayoutBlock, LayoutDescriptor, NdArray, StepResult } from "./env.js";
export { FrameReader, encodeFrame, toFloat64 } from "./protocol.js";
export type { Frame, FrameHeader } from "./protocol.js";
