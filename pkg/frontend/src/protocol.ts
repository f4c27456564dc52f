// Wire schema for the /session endpoint. Frames are single-line JSON.

export type ButtonCommand = "take_control" | "narrow_passage" | "forbidden_path";

export interface ClientMessage {
  type: "hello" | "set_force" | "button_down" | "button_up" | "reset" | "pause";
  force?: [number, number];
  button?: ButtonCommand;
  scenario?: string;
}

export interface IntentionInfo {
  event_id: string;
  command: ButtonCommand;
  issued_at: number;
  ttl: number | null;
  segment?: [[number, number], [number, number]]; // forbidden_path geometry
  exit?: [number, number]; // narrow_passage subgoal
}

export interface SituationInfo {
  f_env_norm: [number, number];
  f_human: [number, number];
  f_des_norm: [number, number];
  human_role: string;
  human_role_since: number;
  robot_role: string;
  robot_role_since: number;
  active_intentions: IntentionInfo[];
  projections: { intention_id: string; trajectory: [number, number][] }[];
}

export interface TickState {
  t: number;
  pair: {
    robot_pos: [number, number];
    robot_heading: number;
    robot_vel: { v: number; omega: number };
    human_pos: [number, number];
    frame_c_pos: [number, number];
    frame_c_heading: number;
  };
  situation: SituationInfo;
  command: { v: number; omega: number };
  route: { waypoints: [number, number][]; current_index: number };
  target: { position: [number, number]; kind: string };
  f_h_c: [number, number];
}

export interface HelloAck {
  type: "hello_ack";
  scenario: string;
  seed: number;
  config: Record<string, unknown> & { dt: number; f_human_max: number };
  config_hash: string;
  buttons_enabled: boolean;
  arena: [number, number];
  obstacles: { vertices: [number, number][] }[];
  goal: [number, number];
}

export type ServerMessage =
  | HelloAck
  | { type: "state"; tick: TickState }
  | { type: "episode_end"; outcome: string }
  | { type: "error"; error: string };

export function encode(msg: ClientMessage): string {
  return JSON.stringify(msg);
}

export function decode(raw: string): ServerMessage {
  return JSON.parse(raw) as ServerMessage;
}

export function setForce(fx: number, fy: number): ClientMessage {
  return { type: "set_force", force: [fx, fy] };
}

export function buttonDown(button: ButtonCommand): ClientMessage {
  return { type: "button_down", button };
}

export function buttonUp(button: ButtonCommand): ClientMessage {
  return { type: "button_up", button };
}
