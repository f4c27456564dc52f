import assert from "node:assert/strict";
import { test } from "node:test";

import { buttonDown, buttonUp, decode, encode, setForce } from "../src/protocol.js";

test("client frames are single-line JSON with exact field names", () => {
  const frames = [
    setForce(10, -2.5),
    buttonDown("narrow_passage"),
    buttonUp("take_control"),
    { type: "hello" } as const,
  ];
  for (const msg of frames) {
    const line = encode(msg);
    assert.ok(!line.includes("\n"));
    assert.deepEqual(JSON.parse(line), msg);
  }
  assert.deepEqual(JSON.parse(encode(setForce(1, 2))), {
    type: "set_force",
    force: [1, 2],
  });
});

test("server frames decode by type", () => {
  const state = decode('{"type":"state","tick":{"t":0.05}}');
  assert.equal(state.type, "state");
  const end = decode('{"type":"episode_end","outcome":"GoalReached"}');
  assert.equal(end.type, "episode_end");
  if (end.type === "episode_end") assert.equal(end.outcome, "GoalReached");
});
