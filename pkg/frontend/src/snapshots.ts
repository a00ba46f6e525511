// Latest-wins snapshot buffer: the render loop always draws the newest
// server state and never waits on the network (server-authoritative; no
// client-side prediction).

import type { FieldMsg, StateMsg } from "./protocol.js";

export class SnapshotBuffer {
  private latest: StateMsg | null = null;
  private fieldSamples: FieldMsg["samples"] = [];
  private received = 0;
  private rendered = 0;

  push(msg: StateMsg): void {
    this.latest = msg;
    this.received += 1;
  }

  pushField(msg: FieldMsg): void {
    this.fieldSamples = msg.samples;
  }

  /** Newest snapshot, marking it rendered (call once per animation frame). */
  take(): StateMsg | null {
    this.rendered = this.received;
    return this.latest;
  }

  get field(): FieldMsg["samples"] {
    return this.fieldSamples;
  }

  /** Snapshots that arrived since the last take(); <=1 between frames
   *  means rendering lags the stream by at most one frame. */
  get pendingCount(): number {
    return this.received - this.rendered;
  }
}
