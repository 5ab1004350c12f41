/** State transitions: banners, telemetry-driven drawing, no phantom motion. */

import { describe, expect, it } from "vitest";

import {
  armPoints,
  initialState,
  onClose,
  onMessage,
  onOpen,
  setMode,
  setSlider,
  setTarget,
} from "../src/state.js";

const REST_LINE =
  "S,1,0.000000,0.000000,0.000000,0.000000,0.000000,280.000,0.000,208.000,accepted";

describe("pendant state", () => {
  it("stores telemetry and exposes the drawn chain from it", () => {
    const state = onMessage(onOpen(initialState()), REST_LINE);
    expect(state.telemetry?.seq).toBe(1);
    const chain = armPoints(state);
    expect(chain?.length).toBe(5);
    expect(chain?.[4][0]).toBeCloseTo(280, 6);
    expect(chain?.[4][2]).toBeCloseTo(208, 6);
  });

  it("shows the error banner and keeps the telemetry seq on solver failure", () => {
    let state = onMessage(onOpen(initialState()), REST_LINE);
    const before = state.telemetry?.seq;
    state = onMessage(state, "E,Unreachable");
    expect(state.banner).toBe("Unreachable");
    expect(state.telemetry?.seq).toBe(before); // no seq advance
    expect(armPoints(state)).toEqual(armPoints(onMessage(onOpen(initialState()), REST_LINE)));
  });

  it("clears the banner on the next accepted telemetry", () => {
    let state = onMessage(onOpen(initialState()), REST_LINE);
    state = onMessage(state, "E,Unreachable");
    state = onMessage(state, REST_LINE.replace("S,1", "S,2"));
    expect(state.banner).toBeNull();
    expect(state.telemetry?.seq).toBe(2);
  });

  it("keeps the banner across rejected telemetry", () => {
    let state = onMessage(onOpen(initialState()), REST_LINE);
    state = onMessage(state, "E,Unreachable");
    const rejected = REST_LINE.replace("accepted", "rejected:LimitExceeded");
    state = onMessage(state, rejected);
    expect(state.banner).toBe("Unreachable");
  });

  it("never moves the drawn arm from slider or target edits", () => {
    let state = onMessage(onOpen(initialState()), REST_LINE);
    const drawn = armPoints(state);
    state = setSlider(state, 0, 45);
    state = setSlider(state, 2, -30);
    state = setTarget(state, "x", 120);
    state = setMode(state, "coords");
    expect(armPoints(state)).toEqual(drawn);
  });

  it("draws nothing before the first telemetry record", () => {
    expect(armPoints(initialState())).toBeNull();
  });

  it("flags disconnects with a banner", () => {
    const state = onClose(onOpen(initialState()));
    expect(state.connection).toBe("closed");
    expect(state.banner).toBe("disconnected");
  });

  it("ignores unknown message types", () => {
    const state = onMessage(onOpen(initialState()), "Z,whatever");
    expect(state.telemetry).toBeNull();
    expect(state.banner).toBeNull();
  });
});
