// Evader steering: the pointer sets the direction (relative to the
// evader's current position), holding Shift eases the throttle; arrow
// keys are the fallback. The sampled command is what goes on the wire.

export interface InputState {
  pointer: { x: number; y: number } | null; // world coordinates
  keys: Set<string>;
  slow: boolean; // modifier held -> reduced throttle
}

export const SLOW_THROTTLE = 0.4;

export function newInputState(): InputState {
  return { pointer: null, keys: new Set(), slow: false };
}

export interface Command {
  dx: number;
  dy: number;
  throttle: number;
}

const ARROWS: Record<string, [number, number]> = {
  ArrowUp: [0, 1],
  ArrowDown: [0, -1],
  ArrowLeft: [-1, 0],
  ArrowRight: [1, 0],
};

/** Map the current input to a command, given the evader's world position. */
export function commandFromInput(input: InputState, ex: number, ey: number): Command {
  const throttle = input.slow ? SLOW_THROTTLE : 1.0;
  if (input.pointer) {
    const dx = input.pointer.x - ex;
    const dy = input.pointer.y - ey;
    const n = Math.hypot(dx, dy);
    if (n < 1e-9) return { dx: 0, dy: 0, throttle: 0 };
    return { dx: dx / n, dy: dy / n, throttle };
  }
  let dx = 0;
  let dy = 0;
  for (const k of input.keys) {
    const d = ARROWS[k];
    if (d) {
      dx += d[0];
      dy += d[1];
    }
  }
  const n = Math.hypot(dx, dy);
  if (n === 0) return { dx: 0, dy: 0, throttle: 0 };
  return { dx: dx / n, dy: dy / n, throttle };
}
