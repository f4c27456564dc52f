// The three handle buttons: take-control is momentary (down on press, up on
// release), the other two fire one message per click. A disabled panel (map 3)
// swallows everything.
import { buttonDown, buttonUp } from "./protocol.js";
export class ButtonPanel {
    constructor(send) {
        this.send = send;
        this.enabled = true;
        this.held = false;
        this.pending = [];
    }
    setEnabled(enabled) {
        this.enabled = enabled;
        if (!enabled && this.held) {
            this.held = false;
        }
    }
    pressTakeControl() {
        if (!this.enabled || this.held)
            return;
        if (this.sendOrQueue(buttonDown("take_control")))
            this.held = true;
    }
    releaseTakeControl() {
        if (!this.held)
            return;
        this.sendOrQueue(buttonUp("take_control"));
        this.held = false;
    }
    get takeControlHeld() {
        return this.held;
    }
    pressOneShot(command) {
        if (!this.enabled)
            return;
        this.sendOrQueue(buttonDown(command));
    }
    get pendingCount() {
        return this.pending.length;
    }
    /** Replays presses that raced a disconnect; called once after the next ack. */
    flushPending() {
        const queued = this.pending;
        this.pending = [];
        for (const msg of queued)
            this.send(msg);
    }
    sendOrQueue(msg) {
        if (this.send(msg))
            return true;
        this.pending.push(msg);
        return false;
    }
}
