// Canvas drawing: world view (arena, obstacles, bar, route, force arrows, role
// labels) plus the rolling force and role-band plots.
import { ROLES } from "./metrics.js";
const ROLE_COLORS = {
    master: "#c678dd",
    slave: "#56b6c2",
    collaborative: "#98c379",
    neutral: "#abb2bf",
    adversarial: "#e06c75",
};
const ARROWS = [
    { key: "f_env_norm", color: "#61afef", label: "env" },
    { key: "f_h_c", color: "#e5c07b", label: "human" },
    { key: "f_des_norm", color: "#98c379", label: "desired" },
];
export class WorldView {
    constructor(ctx, arena = [7.8, 5.7]) {
        this.ctx = ctx;
        this.arena = arena;
    }
    get pxPerMeter() {
        const { width, height } = this.ctx.canvas;
        return Math.min(width / this.arena[0], height / this.arena[1]);
    }
    toScreen(p) {
        const k = this.pxPerMeter;
        return [p[0] * k, this.ctx.canvas.height - p[1] * k];
    }
    screenDeltaToWorld(dx, dy) {
        const k = this.pxPerMeter;
        return [dx / k, -dy / k];
    }
    draw(ack, tick, opts, dragPx) {
        const ctx = this.ctx;
        const { width, height } = ctx.canvas;
        ctx.clearRect(0, 0, width, height);
        ctx.fillStyle = "#1e222a";
        ctx.fillRect(0, 0, width, height);
        if (ack) {
            this.arena = ack.arena;
            ctx.strokeStyle = "#3a3f4b";
            const [ax, ay] = this.toScreen([0, this.arena[1]]);
            const [bx, by] = this.toScreen([this.arena[0], 0]);
            ctx.strokeRect(ax, ay, bx - ax, by - ay);
            for (const obstacle of ack.obstacles) {
                this.polygon(obstacle.vertices, "#4b5263", false);
            }
            this.cross(ack.goal, "#98c379");
        }
        if (!tick)
            return;
        // virtual obstacles from flagged segments render dashed (0.2 m wide strips,
        // matching the world edit the server applies)
        for (const intent of tick.situation.active_intentions) {
            if (intent.command === "forbidden_path" && intent.segment) {
                this.polygon(segmentStrip(intent.segment, 0.2), "#e06c75", true);
            }
        }
        // route
        const route = [tick.pair.frame_c_pos, ...tick.route.waypoints.slice(tick.route.current_index)];
        this.ctx.strokeStyle = "#5c6370";
        this.ctx.setLineDash([6, 6]);
        this.ctx.beginPath();
        route.forEach((p, i) => {
            const [x, y] = this.toScreen(p);
            if (i === 0)
                this.ctx.moveTo(x, y);
            else
                this.ctx.lineTo(x, y);
        });
        this.ctx.stroke();
        this.ctx.setLineDash([]);
        for (const wp of tick.route.waypoints)
            this.dot(wp, 3, "#5c6370");
        this.dot(tick.target.position, 5, tick.target.kind === "explicit_subgoal" ? "#e5c07b" : "#98c379");
        // bar and agents; an adversarial partner gets a warning outline
        const [rx, ry] = this.toScreen(tick.pair.robot_pos);
        const [hx, hy] = this.toScreen(tick.pair.human_pos);
        this.ctx.strokeStyle = "#d19a66";
        this.ctx.lineWidth = 3;
        this.ctx.beginPath();
        this.ctx.moveTo(rx, ry);
        this.ctx.lineTo(hx, hy);
        this.ctx.stroke();
        this.ctx.lineWidth = 1;
        this.circle([rx, ry], 8, "#61afef");
        const humanWarn = tick.situation.human_role === "adversarial";
        this.circle([hx, hy], 8, "#e5c07b", humanWarn ? "#e06c75" : undefined);
        // force arrows at frame C
        const cPos = tick.pair.frame_c_pos;
        for (const arrow of ARROWS) {
            const f = arrow.key === "f_h_c" ? tick.f_h_c : tick.situation[arrow.key];
            this.arrow(cPos, f, arrow.color, opts);
        }
        // drag rubber band from the human marker
        if (dragPx) {
            this.ctx.strokeStyle = "#e5c07b";
            this.ctx.setLineDash([3, 3]);
            this.ctx.beginPath();
            this.ctx.moveTo(hx, hy);
            this.ctx.lineTo(hx + dragPx.dx, hy + dragPx.dy);
            this.ctx.stroke();
            this.ctx.setLineDash([]);
        }
        // role labels
        this.ctx.font = "12px sans-serif";
        this.ctx.fillStyle = ROLE_COLORS[tick.situation.human_role] ?? "#abb2bf";
        this.ctx.fillText(`human: ${tick.situation.human_role}`, hx + 12, hy - 8);
        this.ctx.fillStyle = ROLE_COLORS[tick.situation.robot_role] ?? "#abb2bf";
        this.ctx.fillText(`robot: ${tick.situation.robot_role}`, rx + 12, ry - 8);
    }
    arrow(origin, f, color, opts) {
        const norm = Math.hypot(f[0], f[1]);
        if (norm < 1e-6)
            return;
        const lengthPx = opts.normalizeArrows ? 46 : norm * opts.arrowScale;
        const [ox, oy] = this.toScreen(origin);
        const ux = f[0] / norm;
        const uy = -f[1] / norm;
        const tx = ox + ux * lengthPx;
        const ty = oy + uy * lengthPx;
        this.ctx.strokeStyle = color;
        this.ctx.beginPath();
        this.ctx.moveTo(ox, oy);
        this.ctx.lineTo(tx, ty);
        this.ctx.stroke();
        this.ctx.beginPath();
        this.ctx.moveTo(tx, ty);
        this.ctx.lineTo(tx - ux * 8 - uy * 4, ty - uy * 8 + ux * 4);
        this.ctx.lineTo(tx - ux * 8 + uy * 4, ty - uy * 8 - ux * 4);
        this.ctx.closePath();
        this.ctx.fillStyle = color;
        this.ctx.fill();
    }
    polygon(vertices, color, dashed) {
        this.ctx.strokeStyle = color;
        this.ctx.fillStyle = color + "55";
        if (dashed)
            this.ctx.setLineDash([4, 4]);
        this.ctx.beginPath();
        vertices.forEach((v, i) => {
            const [x, y] = this.toScreen(v);
            if (i === 0)
                this.ctx.moveTo(x, y);
            else
                this.ctx.lineTo(x, y);
        });
        this.ctx.closePath();
        this.ctx.fill();
        this.ctx.stroke();
        this.ctx.setLineDash([]);
    }
    dot(p, r, color) {
        const [x, y] = this.toScreen(p);
        this.ctx.fillStyle = color;
        this.ctx.beginPath();
        this.ctx.arc(x, y, r, 0, Math.PI * 2);
        this.ctx.fill();
    }
    circle(xy, r, fill, outline) {
        this.ctx.fillStyle = fill;
        this.ctx.beginPath();
        this.ctx.arc(xy[0], xy[1], r, 0, Math.PI * 2);
        this.ctx.fill();
        if (outline) {
            this.ctx.strokeStyle = outline;
            this.ctx.lineWidth = 3;
            this.ctx.stroke();
            this.ctx.lineWidth = 1;
        }
    }
    cross(p, color) {
        const [x, y] = this.toScreen(p);
        this.ctx.strokeStyle = color;
        this.ctx.beginPath();
        this.ctx.moveTo(x - 6, y);
        this.ctx.lineTo(x + 6, y);
        this.ctx.moveTo(x, y - 6);
        this.ctx.lineTo(x, y + 6);
        this.ctx.stroke();
    }
}
export function segmentStrip(segment, width) {
    const [a, b] = segment;
    let [ux, uy] = [b[0] - a[0], b[1] - a[1]];
    const len = Math.hypot(ux, uy);
    if (len < 1e-9) {
        ux = 1;
        uy = 0;
    }
    else {
        ux /= len;
        uy /= len;
    }
    const nx = (-uy * width) / 2;
    const ny = (ux * width) / 2;
    return [
        [a[0] - nx, a[1] - ny],
        [b[0] - nx, b[1] - ny],
        [b[0] + nx, b[1] + ny],
        [a[0] + nx, a[1] + ny],
    ];
}
export function drawForcePlot(ctx, series) {
    const { width, height } = ctx.canvas;
    ctx.clearRect(0, 0, width, height);
    ctx.fillStyle = "#1e222a";
    ctx.fillRect(0, 0, width, height);
    if (series.samples.length < 2)
        return;
    const t1 = series.samples[series.samples.length - 1].t;
    const t0 = Math.max(series.samples[0].t, t1 - series.windowSeconds);
    const top = Math.max(series.max(), 5);
    ctx.strokeStyle = "#e5c07b";
    ctx.beginPath();
    let started = false;
    for (const s of series.samples) {
        const x = ((s.t - t0) / Math.max(t1 - t0, 1e-9)) * width;
        const y = height - (s.value / top) * (height - 6) - 3;
        if (!started) {
            ctx.moveTo(x, y);
            started = true;
        }
        else {
            ctx.lineTo(x, y);
        }
    }
    ctx.stroke();
    ctx.fillStyle = "#abb2bf";
    ctx.font = "10px sans-serif";
    ctx.fillText(`|f_h_C| (max ${top.toFixed(1)} N, 30 s)`, 6, 12);
}
export function drawRoleBand(ctx, timeline) {
    const { width, height } = ctx.canvas;
    ctx.clearRect(0, 0, width, height);
    ctx.fillStyle = "#1e222a";
    ctx.fillRect(0, 0, width, height);
    const n = timeline.samples.length;
    if (n === 0)
        return;
    const w = width / n;
    timeline.samples.forEach((s, i) => {
        ctx.fillStyle = ROLE_COLORS[s.role] ?? "#abb2bf";
        ctx.fillRect(i * w, 14, Math.ceil(w), height - 14);
    });
    const hist = timeline.histogram();
    ctx.font = "10px sans-serif";
    let x = 6;
    for (const role of ROLES) {
        if (hist[role] === 0)
            continue;
        ctx.fillStyle = ROLE_COLORS[role];
        const label = `${role} ${hist[role].toFixed(0)}%`;
        ctx.fillText(label, x, 10);
        x += ctx.measureText(label).width + 10;
    }
}
