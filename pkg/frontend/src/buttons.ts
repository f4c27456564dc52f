// The three handle buttons: take-control is momentary (down on press, up on
// release), the other two fire one message per click. A disabled panel (map 3)
// swallows everything.

import { ButtonCommand, ClientMessage, buttonDown, buttonUp } from "./protocol.js";

export class ButtonPanel {
  enabled = true;
  private held = false;
  private pending: ClientMessage[] = [];

  constructor(private send: (msg: ClientMessage) => boolean) {}

  setEnabled(enabled: boolean): void {
    this.enabled = enabled;
    if (!enabled && this.held) {
      this.held = false;
    }
  }

  pressTakeControl(): void {
    if (!this.enabled || this.held) return;
    if (this.sendOrQueue(buttonDown("take_control"))) this.held = true;
  }

  releaseTakeControl(): void {
    if (!this.held) return;
    this.sendOrQueue(buttonUp("take_control"));
    this.held = false;
  }

  get takeControlHeld(): boolean {
    return this.held;
  }

  pressOneShot(command: Exclude<ButtonCommand, "take_control">): void {
    if (!this.enabled) return;
    this.sendOrQueue(buttonDown(command));
  }

  get pendingCount(): number {
    return this.pending.length;
  }

  /** Replays presses that raced a disconnect; called once after the next ack. */
  flushPending(): void {
    const queued = this.pending;
    this.pending = [];
    for (const msg of queued) this.send(msg);
  }

  private sendOrQueue(msg: ClientMessage): boolean {
    if (this.send(msg)) return true;
    this.pending.push(msg);
    return false;
  }
}
