// Browser entry point: wires the WebSocket relay, the state store, the
// canvas views, the 60 Hz mouse pump, and the control panel.

import { EngineClient, WebSocketTransport } from "./client.js"
import { KeyboardView } from "./keyboard_view.js"
import { MousePump, TraceReplayer, parseTraceCsv } from "./mouse_pump.js"
import { TelemetryView } from "./telemetry_view.js"
import { UiStore } from "./state.js"

function el<T extends HTMLElement>(id: string): T {
    const node = document.getElementById(id)
    if (!node) {
        throw new Error(`missing element #${id}`)
    }
    return node as T
}

const store = new UiStore()
const keyboardCanvas = el<HTMLCanvasElement>("keyboard")
const telemetryCanvas = el<HTMLCanvasElement>("telemetry")
const keyboardView = new KeyboardView(keyboardCanvas, store)
const telemetryView = new TelemetryView(telemetryCanvas, store)

const wsUrl = `ws://${location.host}/engine`
const transport = new WebSocketTransport(new WebSocket(wsUrl))
const client = new EngineClient(transport)

client.onMessage((msg) => {
    store.applyServer(msg, performance.now())
    if (msg.kind === "ERROR") {
        el<HTMLSpanElement>("status").textContent = `server error: ${msg.message}`
    }
})
transport.onClose(() => {
    store.connected = false
    el<HTMLSpanElement>("status").textContent = "disconnected — is `gaze-autocal serve` running?"
})

client.hello({ width: 1920, height: 1080, sample_rate_hz: 60 })

// --- sample sources ---

let replaying = false
const sendSample = (t: number, x: number, y: number) => {
    store.noteSampleSent(x, y)
    client.sample(t, x, y)
}
const pump = new MousePump(sendSample)
pump.start()

keyboardCanvas.addEventListener("mousemove", (ev) => {
    if (replaying) {
        return
    }
    const p = keyboardView.toScreen(ev.clientX, ev.clientY)
    pump.updatePosition(p.x, p.y)
})

const replayer = new TraceReplayer(sendSample, () => {
    replaying = false
    el<HTMLSpanElement>("status").textContent = "trace finished — mouse control resumed"
})

el<HTMLInputElement>("trace-file").addEventListener("change", async (ev) => {
    const input = ev.target as HTMLInputElement
    const file = input.files?.[0]
    if (!file) {
        return
    }
    try {
        const rows = parseTraceCsv(await file.text())
        replaying = true
        el<HTMLSpanElement>("status").textContent = `replaying ${rows.length} samples…`
        client.hello({ width: 1920, height: 1080, sample_rate_hz: 60 })
        replayer.play(rows)
    } catch (err) {
        el<HTMLSpanElement>("status").textContent = String(err)
    }
    input.value = ""
})

// --- controls ---

function applyOffset(dx: number, dy: number): void {
    store.noteOffset(dx, dy)
    client.setOffset(dx, dy)
    el<HTMLInputElement>("offset-dx").value = String(dx)
    el<HTMLInputElement>("offset-dy").value = String(dy)
}

for (const [id, dx, dy] of [
    ["preset-0", 0, 0],
    ["preset-xp", 75, 0],
    ["preset-xm", -75, 0],
    ["preset-yp", 0, 75],
    ["preset-ym", 0, -75],
] as const) {
    el<HTMLButtonElement>(id).addEventListener("click", () => applyOffset(dx, dy))
}

el<HTMLButtonElement>("apply-offset").addEventListener("click", () => {
    applyOffset(Number(el<HTMLInputElement>("offset-dx").value) || 0,
                Number(el<HTMLInputElement>("offset-dy").value) || 0)
})

const autocalBox = el<HTMLInputElement>("autocal-on")
autocalBox.addEventListener("change", () => {
    store.noteToggle(autocalBox.checked)
    client.toggleAutocal(autocalBox.checked)
})

el<HTMLButtonElement>("reset").addEventListener("click", () => client.reset())

// --- render loop ---

function frame(now: number): void {
    keyboardView.render(now)
    telemetryView.render()
    const status = el<HTMLSpanElement>("status")
    if (store.connected && !store.lastError && !replaying) {
        status.textContent =
            `typed: "${store.text}"  offset: (${store.offset.dx}, ${store.offset.dy}) px`
    }
    requestAnimationFrame(frame)
}
requestAnimationFrame(frame)
