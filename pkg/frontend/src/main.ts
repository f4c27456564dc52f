// Operator console bootstrap: connect, wire the drag input and handle buttons,
// and render the world plus the rolling plots.

import { ButtonPanel } from "./buttons.js";
import { DragInput } from "./drag.js";
import { ForceSeries, RoleTimeline } from "./metrics.js";
import { SessionClient, sessionUrl } from "./net.js";
import { HelloAck, ServerMessage, TickState, setForce } from "./protocol.js";
import { WorldView, drawForcePlot, drawRoleBand } from "./render.js";

const world = document.getElementById("world") as HTMLCanvasElement;
const forcePlot = document.getElementById("force-plot") as HTMLCanvasElement;
const rolePlot = document.getElementById("role-plot") as HTMLCanvasElement;
const banner = document.getElementById("banner") as HTMLDivElement;
const status = document.getElementById("status") as HTMLDivElement;
const normalizeBox = document.getElementById("normalize") as HTMLInputElement;

const view = new WorldView(world.getContext("2d")!);
const drag = new DragInput(0.1);
const timeline = new RoleTimeline(30);
const series = new ForceSeries(30);

let ack: HelloAck | null = null;
let latest: TickState | null = null;
let outcome: string | null = null;
let client: SessionClient;
let retried = false;

const panel = new ButtonPanel((m) => client.send(m));

function connect(): SessionClient {
  return new SessionClient(sessionUrl(), {
    onMessage: (msg: ServerMessage) => {
      if (msg.type === "hello_ack") {
        ack = msg;
        panel.setEnabled(msg.buttons_enabled);
        panel.flushPending();
        for (const id of ["btn-take", "btn-passage", "btn-forbidden"]) {
          (document.getElementById(id) as HTMLButtonElement).disabled =
            !msg.buttons_enabled;
        }
        status.textContent =
          `${msg.scenario} seed ${msg.seed} cfg ${msg.config_hash}` +
          (msg.buttons_enabled ? "" : " (buttons disabled)");
      } else if (msg.type === "state") {
        latest = msg.tick;
        outcome = null;
        timeline.add(msg.tick.t, msg.tick.situation.human_role);
        series.add(msg.tick.t, Math.hypot(msg.tick.f_h_c[0], msg.tick.f_h_c[1]));
      } else if (msg.type === "episode_end") {
        outcome = msg.outcome;
      } else if (msg.type === "error") {
        console.error("server error:", msg.error);
      }
    },
    onClose: () => {
      banner.textContent = "connection lost";
      banner.hidden = false;
      if (!retried) {
        retried = true; // one reconnect, which re-hellos and flushes queued presses
        setTimeout(() => {
          client = connect();
        }, 1000);
      }
    },
  });
}

client = connect();

// drag-to-force on the world canvas
world.addEventListener("pointerdown", (ev) => {
  world.setPointerCapture(ev.pointerId);
  drag.begin(ev.offsetX, ev.offsetY);
});
world.addEventListener("pointermove", (ev) => {
  drag.move(ev.offsetX, ev.offsetY);
});
const endDrag = () => {
  if (!drag.dragging) return;
  const zero = drag.end();
  client.send(setForce(zero.fx, zero.fy));
};
world.addEventListener("pointerup", endDrag);
world.addEventListener("pointercancel", endDrag);

// handle buttons
const btnTake = document.getElementById("btn-take") as HTMLButtonElement;
btnTake.addEventListener("pointerdown", () => panel.pressTakeControl());
btnTake.addEventListener("pointerup", () => panel.releaseTakeControl());
btnTake.addEventListener("pointerleave", () => panel.releaseTakeControl());
(document.getElementById("btn-passage") as HTMLButtonElement)
  .addEventListener("click", () => panel.pressOneShot("narrow_passage"));
(document.getElementById("btn-forbidden") as HTMLButtonElement)
  .addEventListener("click", () => panel.pressOneShot("forbidden_path"));
(document.getElementById("btn-pause") as HTMLButtonElement)
  .addEventListener("click", () => client.send({ type: "pause" }));
(document.getElementById("btn-reset") as HTMLButtonElement)
  .addEventListener("click", () => {
    timeline.reset();
    series.reset();
    client.send({ type: "reset" });
  });

function frame(nowMs: number): void {
  const sample = drag.poll(nowMs);
  if (sample) client.send(setForce(sample.fx, sample.fy));

  const stale = client.staleness(performance.now()) > 1000;
  banner.hidden = !(stale || !client.open) && outcome === null;
  if (outcome !== null) {
    banner.textContent = `episode over: ${outcome} (reset to go again)`;
  } else if (stale || !client.open) {
    banner.textContent = "connection lost";
  }

  view.draw(ack, latest, {
    normalizeArrows: normalizeBox.checked,
    arrowScale: 2.0,
  }, drag.screenVector());
  drawForcePlot(forcePlot.getContext("2d")!, series);
  drawRoleBand(rolePlot.getContext("2d")!, timeline);
  requestAnimationFrame(frame);
}

requestAnimationFrame(frame);
