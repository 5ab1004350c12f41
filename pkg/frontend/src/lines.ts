/**
 * Wire line formats shared with the bridge: A/C command grammar out,
 * S telemetry and E error lines in.
 */

export interface Telemetry {
  seq: number;
  thetas: number[]; // radians, joints 1..5
  x: number;
  y: number;
  z: number;
  verdict: string;
}

const fmt = (v: number): string => {
  const s = String(Math.round(v * 1e6) / 1e6);
  return s === "-0" ? "0" : s;
};

/** `A <d1..d5>` joint command, degrees. */
export function jointCommand(degrees: number[]): string {
  if (degrees.length !== 5) {
    throw new Error(`need 5 joint values, got ${degrees.length}`);
  }
  return "A " + degrees.map(fmt).join(" ");
}

/** `C <x> <y> <z> <g>` coordinate command, mm plus gripper degrees. */
export function coordCommand(x: number, y: number, z: number, grip: number): string {
  return `C ${fmt(x)} ${fmt(y)} ${fmt(z)} ${fmt(grip)}`;
}

/** Parse an `S,...` telemetry line; null when the line is something else. */
export function parseTelemetry(line: string): Telemetry | null {
  const fields = line.trim().split(",");
  if (fields.length !== 11 || fields[0] !== "S") {
    return null;
  }
  const numbers = fields.slice(1, 10).map(Number);
  if (numbers.some((v) => !Number.isFinite(v))) {
    return null;
  }
  return {
    seq: numbers[0],
    thetas: numbers.slice(1, 6),
    x: numbers[6],
    y: numbers[7],
    z: numbers[8],
    verdict: fields[10],
  };
}

/** Extract the message of an `E,...` operator-error line, else null. */
export function parseError(line: string): string | null {
  return line.startsWith("E,") ? line.slice(2) : null;
}
