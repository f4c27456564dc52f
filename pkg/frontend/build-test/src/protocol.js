// Wire schema for the /session endpoint. Frames are single-line JSON.
export function encode(msg) {
    return JSON.stringify(msg);
}
export function decode(raw) {
    return JSON.parse(raw);
}
export function setForce(fx, fy) {
    return { type: "set_force", force: [fx, fy] };
}
export function buttonDown(button) {
    return { type: "button_down", button };
}
export function buttonUp(button) {
    return { type: "button_up", button };
}
