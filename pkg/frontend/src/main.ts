// Wire-up: fetch the default scenario, create a session, run the input
// and render loops. The server is authoritative; this file only maps DOM
// events to commands and draws the latest snapshot.

import { ArenaClient, createSession, type SocketLike } from "./client.js";
import { commandFromInput, newInputState } from "./input.js";
import type { Scenario } from "./protocol.js";
import { drawFrame } from "./render.js";
import { fitBounds, toWorld } from "./transform.js";

const canvas = document.getElementById("arena") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;
const banner = document.getElementById("banner") as HTMLDivElement;
const overlayToggle = document.getElementById("overlay") as HTMLInputElement;
const reconnectBtn = document.getElementById("reconnect") as HTMLButtonElement;

const base = `${location.protocol}//${location.host}`;

function setBanner(text: string, showReconnect = false): void {
  banner.textContent = text;
  reconnectBtn.style.display = showReconnect ? "inline-block" : "none";
}

async function fetchScenario(): Promise<Scenario | null> {
  try {
    const r = await fetch(`${base}/scenario/default`);
    if (!r.ok) return null;
    return (await r.json()) as Scenario;
  } catch {
    return null;
  }
}

async function play(): Promise<void> {
  setBanner("connecting…");
  const scenario = await fetchScenario();
  if (!scenario) {
    setBanner("no default scenario on the server; start it with --config", true);
    return;
  }
  let info;
  try {
    info = await createSession(base, null);
  } catch (err) {
    setBanner(`${err}`, true);
    return;
  }
  const wsUrl = `${base.replace(/^http/, "ws")}${info.ws}`;
  const ws = new WebSocket(wsUrl) as unknown as SocketLike;
  const client = new ArenaClient(ws, scenario, {
    onEnd: () => setBanner("game over — reload to play again", true),
    onDisconnect: () => setBanner("connection lost", true),
  });

  const view = fitBounds(scenario.environment.bounds, canvas.width, canvas.height);
  const input = newInputState();

  canvas.addEventListener("pointermove", (ev) => {
    const rect = canvas.getBoundingClientRect();
    const [wx, wy] = toWorld(view, ev.clientX - rect.left, ev.clientY - rect.top);
    input.pointer = { x: wx, y: wy };
  });
  canvas.addEventListener("pointerleave", () => {
    input.pointer = null;
  });
  window.addEventListener("keydown", (ev) => {
    if (ev.key === "Shift") input.slow = true;
    else input.keys.add(ev.key);
  });
  window.addEventListener("keyup", (ev) => {
    if (ev.key === "Shift") input.slow = false;
    else input.keys.delete(ev.key);
  });

  client.start();
  setBanner("steer with the pointer (Shift = slow) or arrow keys");

  const commandLoop = setInterval(() => {
    if (client.status === "ended" || client.status === "disconnected") {
      clearInterval(commandLoop);
      return;
    }
    const snap = client.snapshots.take();
    const ex = snap ? snap.ex : scenario.evader.x;
    const ey = snap ? snap.ey : scenario.evader.y;
    client.sendCommand(commandFromInput(input, ex, ey), performance.now());
  }, (scenario.dt ?? 1 / 120) * 1000);

  function frame(): void {
    const snap = client.snapshots.take();
    drawFrame(ctx, view, scenario!, snap, {
      field: client.snapshots.field,
      showField: overlayToggle.checked,
      ended: client.end,
      status: client.status,
    });
    requestAnimationFrame(frame);
  }
  requestAnimationFrame(frame);
}

reconnectBtn.addEventListener("click", () => void play());
void play();
