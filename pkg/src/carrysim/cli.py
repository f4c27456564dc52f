"""Command-line entry points: run headless episodes, compute metrics from trace
files, serve a live session, and replay recorded sessions."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .engine import (
    SCENARIO_POLICY,
    force_series,
    read_trace,
    role_histogram,
    run_episode,
    write_trace,
)
from .policies import ScriptedPolicy
from .scenario import load_scenario
from .service import replay_session, serve_forever


def _build_policy(spec: str | None):
    """--policy accepts a bundled kind name or a JSON policy file."""
    if spec is None:
        return None
    p = Path(spec)
    if p.suffix == ".json" and p.exists():
        return ScriptedPolicy.from_spec(json.loads(p.read_text()))
    return ScriptedPolicy(spec)


def cmd_run(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.scenario)
    policy = _build_policy(args.policy)
    outcome, trace = run_episode(
        scenario,
        policy=policy if policy is not None else SCENARIO_POLICY,
        max_t=args.max_t,
        seed=args.seed,
        record_projections=not args.no_projections,
    )
    if args.out:
        from .config import SimConfig
        sim_config = SimConfig().with_overrides(scenario.overrides)
        write_trace(args.out, trace, sim_config, args.seed, scenario.name, outcome)
    print(f"{scenario.name}: {outcome} after {len(trace)} ticks"
          + (f" -> {args.out}" if args.out else ""))
    return 0 if outcome == "GoalReached" else 1


def cmd_metrics(args: argparse.Namespace) -> int:
    header, rows = read_trace(args.trace)
    if not rows:
        print("trace has no ticks", file=sys.stderr)
        return 1
    hist = role_histogram(rows)
    series = force_series(rows)
    hist_lines = ["role,percent"] + [f"{role},{pct:.6f}" for role, pct in hist.items()]
    series_lines = ["t,f_h_c_norm"] + [f"{t:.6f},{f:.9f}" for t, f in series]
    if args.roles_csv:
        Path(args.roles_csv).write_text("\n".join(hist_lines) + "\n")
    if args.force_csv:
        Path(args.force_csv).write_text("\n".join(series_lines) + "\n")
    if not args.roles_csv and not args.force_csv:
        print("\n".join(hist_lines))
        print()
        print("\n".join(series_lines))
    return 0


def resolve_port(cli_port: int) -> int:
    """CARRYSIM_PORT env var wins over the --port flag."""
    return int(os.environ.get("CARRYSIM_PORT", cli_port))


def cmd_serve(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.scenario)
    port = resolve_port(args.port)
    static_dir = args.static
    if static_dir is None:
        bundled = Path(__file__).resolve().parents[2] / "frontend" / "dist"
        if bundled.is_dir():
            static_dir = str(bundled)
    print(f"serving {scenario.name} on ws://{args.host}:{port}/session"
          + (f" (static: {static_dir})" if static_dir else ""), flush=True)
    serve_forever(
        scenario,
        port,
        seed=args.seed,
        host=args.host,
        static_dir=static_dir,
        speed=args.speed,
        trace_out=args.out,
        replay_out=args.replay_out,
    )
    return 0


def cmd_replay(args: argparse.Namespace) -> int:
    session = replay_session(args.log)
    if args.out:
        session.write_trace(args.out)
    outcome = session.sim.outcome or "Running"
    print(f"replayed {len(session.trace)} ticks: {outcome}"
          + (f" -> {args.out}" if args.out else ""))
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="carrysim",
        description="Deterministic 2D human-robot collaborative transport simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a headless episode")
    p_run.add_argument("--scenario", required=True, help="scenario file or bundled name")
    p_run.add_argument("--policy", help="policy kind name or JSON policy file")
    p_run.add_argument("--seed", type=int, default=0)
    p_run.add_argument("--out", help="trace file to write (JSON lines)")
    p_run.add_argument("--max-t", type=float, default=None, help="episode cap in seconds")
    p_run.add_argument("--no-projections", action="store_true",
                       help="skip future projections (faster)")
    p_run.set_defaults(fn=cmd_run)

    p_metrics = sub.add_parser("metrics", help="role histogram and force series from a trace")
    p_metrics.add_argument("--trace", required=True)
    p_metrics.add_argument("--roles-csv", help="write role histogram CSV here")
    p_metrics.add_argument("--force-csv", help="write force series CSV here")
    p_metrics.set_defaults(fn=cmd_metrics)

    p_serve = sub.add_parser("serve", help="serve a live session over WebSocket")
    p_serve.add_argument("--scenario", required=True)
    p_serve.add_argument("--port", type=int, default=8765,
                         help="port (CARRYSIM_PORT env overrides)")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--seed", type=int, default=0)
    p_serve.add_argument("--speed", type=float, default=1.0, help="real-time factor")
    p_serve.add_argument("--static", help="static asset directory (default: frontend/dist)")
    p_serve.add_argument("--out", help="trace file to write at episode end")
    p_serve.add_argument("--replay-out", help="session message log to write at episode end")
    p_serve.set_defaults(fn=cmd_serve)

    p_replay = sub.add_parser("replay", help="re-run a recorded session message log")
    p_replay.add_argument("--log", required=True)
    p_replay.add_argument("--out", help="trace file to write")
    p_replay.set_defaults(fn=cmd_replay)

    args = parser.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
