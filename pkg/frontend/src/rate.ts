// Client-side command pacing: never emit faster than the server tick.

export class RateLimiter {
  private last = -Infinity;

  constructor(private minIntervalMs: number) {
    if (minIntervalMs <= 0) throw new Error("interval must be positive");
  }

  /** True (and consumes the slot) when a send is allowed at `nowMs`. */
  allow(nowMs: number): boolean {
    if (nowMs - this.last >= this.minIntervalMs - 1e-9) {
      this.last = nowMs;
      return true;
    }
    return false;
  }
}
