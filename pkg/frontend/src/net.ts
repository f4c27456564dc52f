// Session connection: hello handshake, decoded message callbacks, send helpers.

import { ClientMessage, ServerMessage, decode, encode } from "./protocol.js";

export interface SessionHandlers {
  onMessage: (msg: ServerMessage) => void;
  onClose: () => void;
}

export class SessionClient {
  private ws: WebSocket;
  lastStateAt = 0;

  constructor(url: string, handlers: SessionHandlers) {
    this.ws = new WebSocket(url);
    this.ws.onopen = () => this.send({ type: "hello" });
    this.ws.onmessage = (ev: MessageEvent) => {
      let msg: ServerMessage;
      try {
        msg = decode(String(ev.data));
      } catch (err) {
        console.error("bad frame", err);
        return;
      }
      if (msg.type === "state") this.lastStateAt = performance.now();
      handlers.onMessage(msg);
    };
    this.ws.onclose = () => handlers.onClose();
    this.ws.onerror = () => handlers.onClose();
  }

  get open(): boolean {
    return this.ws.readyState === WebSocket.OPEN;
  }

  send(msg: ClientMessage): boolean {
    if (!this.open) return false;
    this.ws.send(encode(msg));
    return true;
  }

  /** Milliseconds since the last state frame; drives the stale banner. */
  staleness(nowMs: number): number {
    return this.lastStateAt === 0 ? 0 : nowMs - this.lastStateAt;
  }

  close(): void {
    this.ws.close();
  }
}

export function sessionUrl(): string {
  const proto = location.protocol === "https:" ? "wss" : "ws";
  return `${proto}://${location.host}/session`;
}
