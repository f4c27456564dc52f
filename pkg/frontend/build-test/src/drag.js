// Drag-vector force input: a pointer drag on the world view maps to a force in
// Newtons (screen dy points down, world y points up). Messages are rate-limited
// to at most 30 per second; releasing always sends an immediate zero.
export const MAX_RATE_HZ = 30;
const MIN_INTERVAL_MS = 1000 / MAX_RATE_HZ;
export class DragInput {
    constructor(scale = 0.1) {
        this.scale = scale;
        this.active = false;
        this.startX = 0;
        this.startY = 0;
        this.lastX = 0;
        this.lastY = 0;
        this.lastSentAt = -Infinity;
    }
    get dragging() {
        return this.active;
    }
    begin(x, y) {
        this.active = true;
        this.startX = x;
        this.startY = y;
        this.lastX = x;
        this.lastY = y;
    }
    move(x, y) {
        if (this.active) {
            this.lastX = x;
            this.lastY = y;
        }
    }
    current() {
        return {
            fx: (this.lastX - this.startX) * this.scale,
            fy: -(this.lastY - this.startY) * this.scale,
        };
    }
    /** Force to send this frame, or null when idle or inside the throttle window. */
    poll(nowMs) {
        if (!this.active)
            return null;
        if (nowMs - this.lastSentAt < MIN_INTERVAL_MS)
            return null;
        this.lastSentAt = nowMs;
        return this.current();
    }
    /** Ends the drag; the returned zero force must be sent unconditionally. */
    end() {
        this.active = false;
        return { fx: 0, fy: 0 };
    }
    /** Drag vector in screen px for rendering the rubber band. */
    screenVector() {
        if (!this.active)
            return null;
        return { dx: this.lastX - this.startX, dy: this.lastY - this.startY };
    }
}
