// Secondary acceptance criterion 9: a button press sent with the console's own
// protocol messages shows up as an active intention within two tick periods, and
// a 10 N drag-produced force arrives as f_h_C of norm 10.
import assert from "node:assert/strict";
import { test } from "node:test";
import { spawn } from "node:child_process";
import WebSocket from "ws";
import { DragInput } from "../src/drag.js";
import { buttonDown, encode, setForce } from "../src/protocol.js";
const PORT = 18000 + Math.floor(Math.random() * 20000);
function startServer() {
    return new Promise((resolve, reject) => {
        const child = spawn("python3", [
            "-m", "carrysim.cli", "serve",
            "--scenario", "free_drive", "--port", String(PORT), "--speed", "4",
        ], { stdio: ["ignore", "pipe", "pipe"] });
        let buf = "";
        const timer = setTimeout(() => reject(new Error("server start timeout")), 15000);
        child.stdout.on("data", (chunk) => {
            buf += chunk.toString();
            if (buf.includes("listening")) {
                clearTimeout(timer);
                resolve(child);
            }
        });
        child.on("exit", (code) => reject(new Error(`server exited early: ${code}\n${buf}`)));
    });
}
function nextFrame(ws, timeoutMs = 10000) {
    return new Promise((resolve, reject) => {
        const timer = setTimeout(() => reject(new Error("recv timeout")), timeoutMs);
        ws.once("message", (data) => {
            clearTimeout(timer);
            resolve(JSON.parse(data.toString()));
        });
    });
}
test("button and drag round-trip through a live session", async () => {
    const server = await startServer();
    const ws = new WebSocket(`ws://127.0.0.1:${PORT}/session`);
    try {
        await new Promise((resolve, reject) => {
            ws.once("open", () => resolve());
            ws.once("error", reject);
        });
        ws.send(encode({ type: "hello" }));
        const ack = await nextFrame(ws);
        assert.equal(ack.type, "hello_ack");
        assert.equal(ack["scenario"], "free_drive");
        assert.equal(ack["buttons_enabled"], true);
        const dt = ack["config"].dt;
        // wait for a state, then press the button exactly as the panel would
        let state = await nextFrame(ws);
        while (state.type !== "state")
            state = await nextFrame(ws);
        const t0 = state.tick.t;
        ws.send(encode(buttonDown("take_control")));
        let eventTick = null;
        for (let i = 0; i < 50; i++) {
            const frame = await nextFrame(ws);
            if (frame.type !== "state")
                continue;
            const cmds = frame.tick.situation.active_intentions.map((e) => e.command);
            if (cmds.includes("take_control")) {
                eventTick = frame.tick.t;
                break;
            }
        }
        assert.notEqual(eventTick, null, "take_control never appeared");
        assert.ok(eventTick - t0 <= 2 * dt + 1e-9, `event appeared after ${(eventTick - t0) / dt} ticks`);
        // a 100 px drag at 0.1 N/px = 10 N, sent with the console's own encoder
        const drag = new DragInput(0.1);
        drag.begin(0, 0);
        drag.move(100, 0);
        const f = drag.poll(1e9);
        let stateBefore = await nextFrame(ws);
        while (stateBefore.type !== "state")
            stateBefore = await nextFrame(ws);
        const tSend = stateBefore.tick.t;
        ws.send(encode(setForce(f.fx, f.fy)));
        let seenNorm = null;
        let seenAt = 0;
        for (let i = 0; i < 50; i++) {
            const frame = await nextFrame(ws);
            if (frame.type !== "state")
                continue;
            const [fx, fy] = frame.tick.f_h_c;
            const norm = Math.hypot(fx, fy);
            if (norm > 1e-6) {
                seenNorm = norm;
                seenAt = frame.tick.t;
                break;
            }
        }
        assert.notEqual(seenNorm, null, "force never appeared");
        assert.ok(Math.abs(seenNorm - 10.0) < 1e-6, `norm was ${seenNorm}`);
        assert.ok(seenAt - tSend <= 2 * dt + 1e-9, "force arrived late");
        console.log("ACCEPTANCE 9: PASS UI round-trip (event within 2 ticks, 10 N drag seen)");
    }
    finally {
        ws.close();
        server.kill("SIGTERM");
        await new Promise((resolve) => server.once("exit", resolve));
    }
});
