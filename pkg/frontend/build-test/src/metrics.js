// Client-side metrics: the role timeline histogram (kept consistent with the
// trace-file metrics command) and rolling plot buffers.
export const ROLES = ["master", "slave", "collaborative", "neutral", "adversarial"];
export class RoleTimeline {
    constructor(windowSeconds = 30) {
        this.windowSeconds = windowSeconds;
        this.counts = {};
        this.total = 0;
        this.samples = [];
    }
    add(t, role) {
        this.counts[role] = (this.counts[role] ?? 0) + 1;
        this.total += 1;
        this.samples.push({ t, role });
        const cutoff = t - this.windowSeconds;
        while (this.samples.length > 0 && this.samples[0].t < cutoff) {
            this.samples.shift();
        }
    }
    /** Whole-episode percentages, matching the trace metrics definition. */
    histogram() {
        const out = {};
        for (const role of ROLES) {
            out[role] = this.total === 0 ? 0 : (100 * (this.counts[role] ?? 0)) / this.total;
        }
        return out;
    }
    reset() {
        this.counts = {};
        this.total = 0;
        this.samples = [];
    }
}
export class ForceSeries {
    constructor(windowSeconds = 30) {
        this.windowSeconds = windowSeconds;
        this.samples = [];
    }
    add(t, value) {
        this.samples.push({ t, value });
        const cutoff = t - this.windowSeconds;
        while (this.samples.length > 0 && this.samples[0].t < cutoff) {
            this.samples.shift();
        }
    }
    max() {
        let m = 0;
        for (const s of this.samples)
            m = Math.max(m, s.value);
        return m;
    }
    reset() {
        this.samples = [];
    }
}
