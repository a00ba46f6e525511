// Canvas drawing with the figure color semantics: grey obstacles, red
// evader, blue pursuer, LOS ray, score clock, optional field overlay.

import type { Scenario, StateMsg } from "./protocol.js";
import { toScreen, type Viewport } from "./transform.js";

export const COLORS = {
  background: "#ffffff",
  obstacle: "#9a9a9a",
  evader: "#cc0000",
  pursuer: "#0000cc",
  losOk: "#2a9d2a",
  losBroken: "#d04040",
  field: "#888888",
  text: "#222222",
};

export interface FrameExtras {
  field: [number, number, number, number][];
  showField: boolean;
  ended: { reason: string; score: number } | null;
  status: string;
}

export function drawFrame(
  ctx: CanvasRenderingContext2D,
  view: Viewport,
  scenario: Scenario,
  state: StateMsg | null,
  extras: FrameExtras,
): void {
  const canvas = ctx.canvas;
  ctx.fillStyle = COLORS.background;
  ctx.fillRect(0, 0, canvas.width, canvas.height);

  ctx.fillStyle = COLORS.obstacle;
  for (const poly of scenario.environment.obstacles) {
    ctx.beginPath();
    poly.forEach(([x, y], i) => {
      const [sx, sy] = toScreen(view, x, y);
      if (i === 0) ctx.moveTo(sx, sy);
      else ctx.lineTo(sx, sy);
    });
    ctx.closePath();
    ctx.fill();
  }

  if (extras.showField) {
    ctx.strokeStyle = COLORS.field;
    ctx.lineWidth = 1;
    for (const [x, y, vx, vy] of extras.field) {
      const len = 0.3;
      const [x0, y0] = toScreen(view, x - (vx * len) / 2, y - (vy * len) / 2);
      const [x1, y1] = toScreen(view, x + (vx * len) / 2, y + (vy * len) / 2);
      ctx.beginPath();
      ctx.moveTo(x0, y0);
      ctx.lineTo(x1, y1);
      ctx.stroke();
      ctx.beginPath();
      ctx.arc(x1, y1, 1.5, 0, 2 * Math.PI);
      ctx.fillStyle = COLORS.field;
      ctx.fill();
    }
  }

  if (state) {
    const [px, py] = toScreen(view, state.px, state.py);
    const [ex, ey] = toScreen(view, state.ex, state.ey);
    ctx.strokeStyle = state.los ? COLORS.losOk : COLORS.losBroken;
    ctx.lineWidth = 1.5;
    ctx.setLineDash([6, 4]);
    ctx.beginPath();
    ctx.moveTo(px, py);
    ctx.lineTo(ex, ey);
    ctx.stroke();
    ctx.setLineDash([]);
    ctx.fillStyle = COLORS.pursuer;
    ctx.beginPath();
    ctx.arc(px, py, 7, 0, 2 * Math.PI);
    ctx.fill();
    ctx.fillStyle = COLORS.evader;
    ctx.beginPath();
    ctx.arc(ex, ey, 7, 0, 2 * Math.PI);
    ctx.fill();
    ctx.fillStyle = COLORS.text;
    ctx.font = "16px system-ui, sans-serif";
    ctx.fillText(`tracked ${state.score.toFixed(2)} s`, 12, 22);
  }

  ctx.fillStyle = COLORS.text;
  ctx.font = "13px system-ui, sans-serif";
  ctx.fillText(extras.status, 12, canvas.height - 10);

  if (extras.ended) {
    ctx.fillStyle = "rgba(255,255,255,0.85)";
    ctx.fillRect(0, canvas.height / 2 - 50, canvas.width, 100);
    ctx.fillStyle = COLORS.text;
    ctx.font = "bold 24px system-ui, sans-serif";
    ctx.textAlign = "center";
    const label = extras.ended.reason === "los_broken" ? "you escaped!" : "time up";
    ctx.fillText(`${label}  —  tracked for ${extras.ended.score.toFixed(2)} s`,
      canvas.width / 2, canvas.height / 2 + 8);
    ctx.textAlign = "left";
  }
}
