import assert from "node:assert/strict";
import { test } from "node:test";
import { execFileSync } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { ForceSeries, RoleTimeline } from "../src/metrics.js";

test("histogram counts percentages over all ticks", () => {
  const tl = new RoleTimeline();
  for (let i = 0; i < 6; i++) tl.add(i * 0.05, "collaborative");
  for (let i = 6; i < 12; i++) tl.add(i * 0.05, "adversarial");
  const hist = tl.histogram();
  assert.equal(hist.collaborative, 50);
  assert.equal(hist.adversarial, 50);
  assert.equal(hist.master + hist.slave + hist.neutral, 0);
});

test("rolling window trims plot samples but not the histogram", () => {
  const tl = new RoleTimeline(1.0);
  for (let i = 0; i < 100; i++) tl.add(i * 0.05, "slave");
  assert.ok(tl.samples.length <= 21);
  assert.equal(tl.histogram().slave, 100);
  const fs = new ForceSeries(1.0);
  for (let i = 0; i < 100; i++) fs.add(i * 0.05, i);
  assert.ok(fs.samples.length <= 21);
  assert.equal(fs.max(), 99);
});

// Secondary acceptance criterion 10: the console's role timeline histogram must
// match the trace-file metrics command within one percentage point per role.
test("UI histogram matches the metrics CLI on the same episode", () => {
  const dir = mkdtempSync(join(tmpdir(), "carrysim-ui-"));
  try {
    const trace = join(dir, "trace.jsonl");
    execFileSync("python3", [
      "-m", "carrysim.cli", "run", "--scenario", "forbidden_button",
      "--seed", "0", "--out", trace, "--no-projections",
    ], { stdio: "pipe" });

    const lines = readFileSync(trace, "utf8").trim().split("\n").slice(1);
    const tl = new RoleTimeline();
    for (const line of lines) {
      const tick = JSON.parse(line);
      tl.add(tick.t, tick.situation.human_role);
    }
    const uiHist = tl.histogram();

    const csv = execFileSync("python3", [
      "-m", "carrysim.cli", "metrics", "--trace", trace,
    ], { stdio: "pipe" }).toString();
    const cliHist: Record<string, number> = {};
    for (const line of csv.split("\n")) {
      const m = line.match(/^(master|slave|collaborative|neutral|adversarial),([\d.]+)$/);
      if (m) cliHist[m[1]] = parseFloat(m[2]);
    }
    assert.equal(Object.keys(cliHist).length, 5);
    for (const role of Object.keys(cliHist)) {
      const diff = Math.abs(cliHist[role] - (uiHist as Record<string, number>)[role]);
      assert.ok(diff <= 1.0, `${role}: UI ${uiHist[role as never]} vs CLI ${cliHist[role]}`);
    }
    console.log("ACCEPTANCE 10: PASS UI histogram matches metrics CLI", uiHist);
  } finally {
    rmSync(dir, { recursive: true, force: true });
  }
});
