import assert from "node:assert/strict";
import { test } from "node:test";

import { DragInput, MAX_RATE_HZ } from "../src/drag.js";

test("drag maps pixels to Newtons at the configured scale", () => {
  const drag = new DragInput(0.1);
  drag.begin(50, 50);
  drag.move(150, 50); // 100 px east
  const f = drag.current();
  assert.equal(f.fx, 10);
  assert.equal(f.fy, -0); // no vertical component
});

test("screen-down drags map to negative world y", () => {
  const drag = new DragInput(0.1);
  drag.begin(0, 0);
  drag.move(0, 80); // 80 px down on screen
  const f = drag.current();
  assert.equal(f.fx, 0);
  assert.equal(f.fy, -8);
});

test("release reports a zero force and stops polling", () => {
  const drag = new DragInput(0.1);
  drag.begin(0, 0);
  drag.move(40, -30);
  const zero = drag.end();
  assert.deepEqual(zero, { fx: 0, fy: 0 });
  assert.equal(drag.poll(99999), null);
  assert.equal(drag.dragging, false);
});

test("poll rate never exceeds 30 Hz", () => {
  const drag = new DragInput(0.1);
  drag.begin(0, 0);
  drag.move(100, 0);
  let sent = 0;
  // simulate a 60 fps render loop for exactly one second
  for (let frameIdx = 0; frameIdx < 60; frameIdx++) {
    const now = (frameIdx * 1000) / 60;
    if (drag.poll(now) !== null) sent += 1;
  }
  assert.ok(sent <= MAX_RATE_HZ, `sent ${sent} messages in 1s`);
  assert.ok(sent >= MAX_RATE_HZ / 2, `throttle too aggressive: ${sent}`);
});

test("oversized drags are sent as-is; the server clamps", () => {
  const drag = new DragInput(0.1);
  drag.begin(0, 0);
  drag.move(400, 0);
  assert.equal(drag.current().fx, 40); // 40 N on the wire, clamped to 30 server-side
});

test("button presses while disconnected queue and flush once", async () => {
  const { ButtonPanel } = await import("../src/buttons.js");
  const sent: unknown[] = [];
  let connected = false;
  const panel = new ButtonPanel((msg) => {
    if (!connected) return false;
    sent.push(msg);
    return true;
  });
  panel.pressOneShot("narrow_passage");
  panel.pressOneShot("forbidden_path");
  assert.equal(sent.length, 0);
  assert.equal(panel.pendingCount, 2);
  connected = true;
  panel.flushPending(); // wired to the hello_ack after reconnect
  assert.equal(sent.length, 2);
  assert.equal(panel.pendingCount, 0);
});
