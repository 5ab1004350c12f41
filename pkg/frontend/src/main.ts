/**
 * DOM wiring: sliders and coordinate entry on the left, live top/side arm
 * views on the right, one WebSocket to the bridge.
 */

import { radToDeg } from "./kinematics.js";
import { coordCommand, jointCommand } from "./lines.js";
import { drawSideView, drawTopView } from "./render.js";
import {
  PendantState,
  armPoints,
  initialState,
  onClose,
  onMessage,
  onOpen,
  setMode,
  setSlider,
  setTarget,
} from "./state.js";

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
};

let state: PendantState = initialState();
let socket: WebSocket | null = null;

function defaultUrl(): string {
  const fromQuery = new URLSearchParams(location.search).get("ws");
  return fromQuery ?? "ws://127.0.0.1:7783";
}

function send(line: string): void {
  if (state.connection !== "open" || socket === null) {
    update({ ...state, banner: "disconnected" });
    return;
  }
  socket.send(line);
}

function connect(url: string): void {
  socket?.close();
  update({ ...state, connection: "connecting", banner: null });
  socket = new WebSocket(url);
  socket.onopen = () => update(onOpen(state));
  socket.onclose = () => update(onClose(state));
  socket.onmessage = (event) => update(onMessage(state, String(event.data)));
}

function update(next: PendantState): void {
  state = next;
  requestAnimationFrame(render);
}

function render(): void {
  const chain = armPoints(state);
  const target = state.mode === "coords" ? state.target : null;
  drawTopView($("top-view") as unknown as HTMLCanvasElement, chain, target);
  drawSideView($("side-view") as unknown as HTMLCanvasElement, chain, target);

  $("status").textContent = state.connection;
  $("status").className = `status ${state.connection}`;
  const banner = $("banner");
  banner.textContent = state.banner ?? "";
  banner.style.display = state.banner ? "block" : "none";

  const t = state.telemetry;
  $("readout").textContent = t
    ? `seq ${t.seq}  tool (${t.x.toFixed(1)}, ${t.y.toFixed(1)}, ${t.z.toFixed(1)}) mm  ` +
      `joints [${t.thetas.map((v) => radToDeg(v).toFixed(1)).join(", ")}] deg  ${t.verdict}`
    : "no telemetry yet";

  $("joints-panel").style.display = state.mode === "joints" ? "block" : "none";
  $("coords-panel").style.display = state.mode === "coords" ? "block" : "none";
}

function wire(): void {
  for (let i = 0; i < 5; i++) {
    const slider = $<HTMLInputElement>(`joint-${i + 1}`);
    const label = $(`joint-${i + 1}-value`);
    slider.addEventListener("input", () => {
      const value = Number(slider.value);
      label.textContent = `${value}`;
      state = setSlider(state, i, value);
      send(jointCommand(state.sliders)); // bridge owns debouncing
      update(state);
    });
  }

  $("send-coord").addEventListener("click", () => {
    for (const field of ["x", "y", "z", "grip"] as const) {
      state = setTarget(state, field, Number($<HTMLInputElement>(`target-${field}`).value));
    }
    const { x, y, z, grip } = state.target;
    send(coordCommand(x, y, z, grip));
    update(state);
  });

  $("mode-joints").addEventListener("click", () => update(setMode(state, "joints")));
  $("mode-coords").addEventListener("click", () => update(setMode(state, "coords")));
  $("connect").addEventListener("click", () =>
    connect($<HTMLInputElement>("ws-url").value),
  );

  $<HTMLInputElement>("ws-url").value = defaultUrl();
  connect(defaultUrl());
}

window.addEventListener("load", wire);
