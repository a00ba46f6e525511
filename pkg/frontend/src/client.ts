// Session client: opens the stream, paces outgoing commands at the tick
// rate, and feeds the snapshot buffer. The socket is injected so the
// logic is testable without a browser or a server.

import { encodeCommand, encodeStart, parseServerMsg, type EndMsg, type Scenario } from "./protocol.js";
import { RateLimiter } from "./rate.js";
import { SnapshotBuffer } from "./snapshots.js";
import type { Command } from "./input.js";

export interface SocketLike {
  send(data: string): void;
  close(): void;
  onmessage: ((ev: { data: string }) => void) | null;
  onclose: ((ev: unknown) => void) | null;
  onerror: ((ev: unknown) => void) | null;
}

export type ConnectionStatus = "connecting" | "live" | "ended" | "disconnected";

export interface ClientEvents {
  onEnd?: (end: EndMsg) => void;
  onDisconnect?: () => void;
}

export class ArenaClient {
  readonly snapshots = new SnapshotBuffer();
  status: ConnectionStatus = "connecting";
  end: EndMsg | null = null;
  private limiter: RateLimiter;
  private started = false;

  constructor(
    private socket: SocketLike,
    readonly scenario: Scenario,
    private events: ClientEvents = {},
  ) {
    const dt = scenario.dt ?? 1 / 120;
    this.limiter = new RateLimiter(dt * 1000);
    socket.onmessage = (ev) => this.handleMessage(ev.data);
    socket.onclose = () => this.handleClose();
    socket.onerror = () => this.handleClose();
  }

  start(): void {
    if (!this.started) {
      this.socket.send(encodeStart());
      this.started = true;
      this.status = "live";
    }
  }

  /** Send the current command if the tick-rate budget allows it. */
  sendCommand(cmd: Command, nowMs: number): boolean {
    if (this.status !== "live" && this.status !== "connecting") return false;
    if (!this.limiter.allow(nowMs)) return false;
    this.socket.send(encodeCommand(cmd.dx, cmd.dy, cmd.throttle));
    this.started = true;
    this.status = "live";
    return true;
  }

  private handleMessage(raw: string): void {
    const msg = parseServerMsg(raw);
    if (!msg) return;
    if (msg.type === "state") {
      this.snapshots.push(msg);
      if (this.status === "connecting") this.status = "live";
    } else if (msg.type === "field") {
      this.snapshots.pushField(msg);
    } else {
      this.end = msg;
      this.status = "ended";
      this.events.onEnd?.(msg);
    }
  }

  private handleClose(): void {
    if (this.status !== "ended") {
      this.status = "disconnected";
      this.events.onDisconnect?.();
    }
  }
}

export interface SessionInfo {
  id: string;
  ws: string;
}

/** POST the scenario, returning the websocket path for the new session. */
export async function createSession(
  baseUrl: string,
  scenario: Scenario | null,
  fetchFn: typeof fetch = fetch,
): Promise<SessionInfo> {
  const resp = await fetchFn(`${baseUrl}/session`, {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify(scenario ?? {}),
  });
  if (!resp.ok) {
    let detail = `${resp.status}`;
    try {
      const body = (await resp.json()) as { detail?: string };
      if (body.detail) detail = body.detail;
    } catch {
      /* keep the status code */
    }
    throw new Error(`session rejected: ${detail}`);
  }
  return (await resp.json()) as SessionInfo;
}
