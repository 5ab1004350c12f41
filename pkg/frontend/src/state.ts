/**
 * Pendant state and its pure transitions.
 *
 * The rendered arm always derives from the most recent telemetry record;
 * slider and target edits never touch it, so the view cannot show motion
 * the slave has not reported.
 */

import { Vec3, jointChain } from "./kinematics.js";
import { Telemetry, parseError, parseTelemetry } from "./lines.js";

export type Mode = "joints" | "coords";
export type Connection = "connecting" | "open" | "closed";

export interface PendantState {
  mode: Mode;
  sliders: number[]; // degrees, joints 1..5
  target: { x: number; y: number; z: number; grip: number };
  telemetry: Telemetry | null;
  banner: string | null;
  connection: Connection;
}

export function initialState(): PendantState {
  return {
    mode: "joints",
    sliders: [0, 0, 0, 0, 0],
    target: { x: 280, y: 0, z: 208, grip: 0 },
    telemetry: null,
    banner: null,
    connection: "connecting",
  };
}

export function onOpen(state: PendantState): PendantState {
  return { ...state, connection: "open", banner: null };
}

export function onClose(state: PendantState): PendantState {
  return { ...state, connection: "closed", banner: "disconnected" };
}

/** Apply one incoming WebSocket text message. */
export function onMessage(state: PendantState, text: string): PendantState {
  const telemetry = parseTelemetry(text);
  if (telemetry !== null) {
    // a freshly accepted command clears any stale error banner
    const banner = telemetry.verdict === "accepted" ? null : state.banner;
    return { ...state, telemetry, banner };
  }
  const error = parseError(text);
  if (error !== null) {
    return { ...state, banner: error };
  }
  return state;
}

export function setMode(state: PendantState, mode: Mode): PendantState {
  return { ...state, mode };
}

export function setSlider(state: PendantState, joint: number, degrees: number): PendantState {
  const sliders = state.sliders.slice();
  sliders[joint] = degrees;
  return { ...state, sliders };
}

export function setTarget(
  state: PendantState,
  field: keyof PendantState["target"],
  value: number,
): PendantState {
  return { ...state, target: { ...state.target, [field]: value } };
}

/** Joint polyline to draw, from telemetry angles only; null before first record. */
export function armPoints(state: PendantState): Vec3[] | null {
  if (state.telemetry === null) {
    return null;
  }
  return jointChain(state.telemetry.thetas);
}
