// Wire types for the arena service. Field names are bit-exact with the
// server protocol; parsing is defensive (unknown frames return null).

export interface StateMsg {
  type: "state";
  t: number;
  px: number;
  py: number;
  ex: number;
  ey: number;
  los: boolean;
  score: number;
}

export interface FieldMsg {
  type: "field";
  samples: [number, number, number, number][];
}

export interface EndMsg {
  type: "end";
  reason: "los_broken" | "max_time";
  score: number;
}

export type ServerMsg = StateMsg | FieldMsg | EndMsg;

export interface CommandMsg {
  type: "cmd";
  dx: number;
  dy: number;
  throttle: number;
}

export interface Scenario {
  version: string;
  environment: { bounds: [number, number, number, number]; obstacles: [number, number][][] };
  pursuer: { x: number; y: number; speed: number };
  evader: { x: number; y: number; speed: number };
  dt?: number;
  max_time?: number;
  [extra: string]: unknown;
}

const isNum = (v: unknown): v is number => typeof v === "number" && Number.isFinite(v);

export function parseServerMsg(raw: string): ServerMsg | null {
  let data: unknown;
  try {
    data = JSON.parse(raw);
  } catch {
    return null;
  }
  if (typeof data !== "object" || data === null) return null;
  const m = data as Record<string, unknown>;
  if (m.type === "state") {
    if (![m.t, m.px, m.py, m.ex, m.ey, m.score].every(isNum)) return null;
    if (typeof m.los !== "boolean") return null;
    return m as unknown as StateMsg;
  }
  if (m.type === "field") {
    if (!Array.isArray(m.samples)) return null;
    for (const s of m.samples) {
      if (!Array.isArray(s) || s.length !== 4 || !s.every(isNum)) return null;
    }
    return m as unknown as FieldMsg;
  }
  if (m.type === "end") {
    if (m.reason !== "los_broken" && m.reason !== "max_time") return null;
    if (!isNum(m.score)) return null;
    return m as unknown as EndMsg;
  }
  return null;
}

export function encodeCommand(dx: number, dy: number, throttle: number): string {
  const clamped = Math.max(0, Math.min(1, throttle));
  return JSON.stringify({ type: "cmd", dx, dy, throttle: clamped });
}

export function encodeStart(): string {
  return JSON.stringify({ type: "start" });
}
