// World <-> screen mapping: fit the scenario bounds into the canvas with
// uniform scale, centered, y axis pointing up in world space.

export interface Viewport {
  scale: number;
  offsetX: number;
  offsetY: number;
  height: number;
}

export function fitBounds(
  bounds: [number, number, number, number],
  canvasW: number,
  canvasH: number,
  margin = 10,
): Viewport {
  const [xmin, ymin, xmax, ymax] = bounds;
  const w = xmax - xmin;
  const h = ymax - ymin;
  if (w <= 0 || h <= 0) throw new Error("empty bounds");
  const scale = Math.min((canvasW - 2 * margin) / w, (canvasH - 2 * margin) / h);
  const offsetX = (canvasW - scale * w) / 2 - scale * xmin;
  const offsetY = (canvasH - scale * h) / 2 + scale * ymax;
  return { scale, offsetX, offsetY, height: canvasH };
}

export function toScreen(v: Viewport, x: number, y: number): [number, number] {
  return [v.offsetX + v.scale * x, v.offsetY - v.scale * y];
}

export function toWorld(v: Viewport, sx: number, sy: number): [number, number] {
  return [(sx - v.offsetX) / v.scale, (v.offsetY - sy) / v.scale];
}
