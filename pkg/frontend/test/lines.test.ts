/** Wire line formats for commands, telemetry and operator errors. */

import { describe, expect, it } from "vitest";

import { coordCommand, jointCommand, parseError, parseTelemetry } from "../src/lines.js";

describe("command lines", () => {
  it("formats the rest joint command", () => {
    expect(jointCommand([0, 0, 0, 0, 0])).toBe("A 0 0 0 0 0");
  });

  it("formats a yawed joint command", () => {
    expect(jointCommand([90, 0, 0, 0, 0])).toBe("A 90 0 0 0 0");
  });

  it("formats mixed-sign fractional joints", () => {
    expect(jointCommand([12.5, -8, 0, 3.25, 90])).toBe("A 12.5 -8 0 3.25 90");
  });

  it("rejects the wrong joint count", () => {
    expect(() => jointCommand([1, 2, 3])).toThrow();
  });

  it("formats coordinate commands", () => {
    expect(coordCommand(250, 0, 150, 0)).toBe("C 250 0 150 0");
    expect(coordCommand(280.5, -10, 208, 45)).toBe("C 280.5 -10 208 45");
  });
});

describe("telemetry lines", () => {
  const LINE =
    "S,7,0.100000,-0.200000,0.300000,0.000000,0.500000,250.123,0.000,150.456,accepted";

  it("parses every field", () => {
    const record = parseTelemetry(LINE);
    expect(record).not.toBeNull();
    expect(record?.seq).toBe(7);
    expect(record?.thetas).toEqual([0.1, -0.2, 0.3, 0, 0.5]);
    expect(record?.x).toBeCloseTo(250.123);
    expect(record?.verdict).toBe("accepted");
  });

  it("parses rejected verdicts", () => {
    const record = parseTelemetry(LINE.replace("accepted", "rejected:CrcMismatch"));
    expect(record?.verdict).toBe("rejected:CrcMismatch");
  });

  it("returns null for other line types", () => {
    expect(parseTelemetry("E,Unreachable")).toBeNull();
    expect(parseTelemetry("J,1,0,0,0,0,0,ab")).toBeNull();
    expect(parseTelemetry("S,1,2,3")).toBeNull();
  });

  it("returns null for corrupt numbers", () => {
    expect(parseTelemetry(LINE.replace("250.123", "n/a"))).toBeNull();
  });
});

describe("error lines", () => {
  it("extracts operator messages", () => {
    expect(parseError("E,Unreachable")).toBe("Unreachable");
    expect(parseError("E,error: unknown input tag 'B'")).toBe("error: unknown input tag 'B'");
  });

  it("passes on everything else", () => {
    expect(parseError("S,1,...")).toBeNull();
  });
});
