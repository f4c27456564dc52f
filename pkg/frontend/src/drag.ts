// Drag-vector force input: a pointer drag on the world view maps to a force in
// Newtons (screen dy points down, world y points up). Messages are rate-limited
// to at most 30 per second; releasing always sends an immediate zero.

export interface ForceSample {
  fx: number;
  fy: number;
}

export const MAX_RATE_HZ = 30;
const MIN_INTERVAL_MS = 1000 / MAX_RATE_HZ;

export class DragInput {
  private active = false;
  private startX = 0;
  private startY = 0;
  private lastX = 0;
  private lastY = 0;
  private lastSentAt = -Infinity;

  constructor(public scale: number = 0.1) {}

  get dragging(): boolean {
    return this.active;
  }

  begin(x: number, y: number): void {
    this.active = true;
    this.startX = x;
    this.startY = y;
    this.lastX = x;
    this.lastY = y;
  }

  move(x: number, y: number): void {
    if (this.active) {
      this.lastX = x;
      this.lastY = y;
    }
  }

  current(): ForceSample {
    return {
      fx: (this.lastX - this.startX) * this.scale,
      fy: -(this.lastY - this.startY) * this.scale,
    };
  }

  /** Force to send this frame, or null when idle or inside the throttle window. */
  poll(nowMs: number): ForceSample | null {
    if (!this.active) return null;
    if (nowMs - this.lastSentAt < MIN_INTERVAL_MS) return null;
    this.lastSentAt = nowMs;
    return this.current();
  }

  /** Ends the drag; the returned zero force must be sent unconditionally. */
  end(): ForceSample {
    this.active = false;
    return { fx: 0, fy: 0 };
  }

  /** Drag vector in screen px for rendering the rubber band. */
  screenVector(): { dx: number; dy: number } | null {
    if (!this.active) return null;
    return { dx: this.lastX - this.startX, dy: this.lastY - this.startY };
  }
}
