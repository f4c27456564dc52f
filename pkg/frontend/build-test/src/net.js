// Session connection: hello handshake, decoded message callbacks, send helpers.
import { decode, encode } from "./protocol.js";
export class SessionClient {
    constructor(url, handlers) {
        this.lastStateAt = 0;
        this.ws = new WebSocket(url);
        this.ws.onopen = () => this.send({ type: "hello" });
        this.ws.onmessage = (ev) => {
            let msg;
            try {
                msg = decode(String(ev.data));
            }
            catch (err) {
                console.error("bad frame", err);
                return;
            }
            if (msg.type === "state")
                this.lastStateAt = performance.now();
            handlers.onMessage(msg);
        };
        this.ws.onclose = () => handlers.onClose();
        this.ws.onerror = () => handlers.onClose();
    }
    get open() {
        return this.ws.readyState === WebSocket.OPEN;
    }
    send(msg) {
        if (!this.open)
            return false;
        this.ws.send(encode(msg));
        return true;
    }
    /** Milliseconds since the last state frame; drives the stale banner. */
    staleness(nowMs) {
        return this.lastStateAt === 0 ? 0 : nowMs - this.lastStateAt;
    }
    close() {
        this.ws.close();
    }
}
export function sessionUrl() {
    const proto = location.protocol === "https:" ? "wss" : "ws";
    return `${proto}://${location.host}/session`;
}
