// Client-side metrics: the role timeline histogram (kept consistent with the
// trace-file metrics command) and rolling plot buffers.

export const ROLES = ["master", "slave", "collaborative", "neutral", "adversarial"] as const;
export type RoleName = (typeof ROLES)[number];

export class RoleTimeline {
  counts: Record<string, number> = {};
  total = 0;
  samples: { t: number; role: string }[] = [];

  constructor(public windowSeconds = 30) {}

  add(t: number, role: string): void {
    this.counts[role] = (this.counts[role] ?? 0) + 1;
    this.total += 1;
    this.samples.push({ t, role });
    const cutoff = t - this.windowSeconds;
    while (this.samples.length > 0 && this.samples[0].t < cutoff) {
      this.samples.shift();
    }
  }

  /** Whole-episode percentages, matching the trace metrics definition. */
  histogram(): Record<RoleName, number> {
    const out = {} as Record<RoleName, number>;
    for (const role of ROLES) {
      out[role] = this.total === 0 ? 0 : (100 * (this.counts[role] ?? 0)) / this.total;
    }
    return out;
  }

  reset(): void {
    this.counts = {};
    this.total = 0;
    this.samples = [];
  }
}

export class ForceSeries {
  samples: { t: number; value: number }[] = [];

  constructor(public windowSeconds = 30) {}

  add(t: number, value: number): void {
    this.samples.push({ t, value });
    const cutoff = t - this.windowSeconds;
    while (this.samples.length > 0 && this.samples[0].t < cutoff) {
      this.samples.shift();
    }
  }

  max(): number {
    let m = 0;
    for (const s of this.samples) m = Math.max(m, s.value);
    return m;
  }

  reset(): void {
    this.samples = [];
  }
}
