// Canvas renderer for the keyboard mirror: keys, dwell progress (a green
// rectangle shrinking toward the key center), the activation flash, the
// text box with typed text, the calibration zone around the last typed
// character, and the raw/calibrated cursors.

import { charCenter } from "./protocol.js"
import { UiStore } from "./state.js"

const KEY_FILL = "#2b2f3a"
const KEY_EDGE = "#4a5160"
const KEY_TEXT = "#e8eaf0"
const DWELL_GREEN = "rgba(80, 200, 120, 0.85)"
const FLASH_RED = "rgba(220, 70, 70, 0.9)"
const TEXTBOX_FILL = "#1a1d24"
const ZONE_STROKE = "rgba(120, 180, 255, 0.8)"

export class KeyboardView {
    private ctx: CanvasRenderingContext2D
    private scale = 1

    constructor(private canvas: HTMLCanvasElement, private store: UiStore) {
        const ctx = canvas.getContext("2d")
        if (!ctx) {
            throw new Error("2d canvas unavailable")
        }
        this.ctx = ctx
    }

    // canvas pixels -> virtual screen pixels (the protocol's coordinate space)
    toScreen(clientX: number, clientY: number): { x: number; y: number } {
        const rect = this.canvas.getBoundingClientRect()
        return {
            x: ((clientX - rect.left) / rect.width) * this.virtualWidth(),
            y: ((clientY - rect.top) / rect.height) * this.virtualHeight(),
        }
    }

    private virtualWidth(): number {
        const lay = this.store.layout
        if (!lay) {
            return 1920
        }
        return lay.text_box.x + lay.text_box.w
    }

    private virtualHeight(): number {
        return 1080
    }

    render(now: number): void {
        const { ctx, canvas, store } = this
        const lay = store.layout
        ctx.clearRect(0, 0, canvas.width, canvas.height)
        if (!lay) {
            ctx.fillStyle = KEY_TEXT
            ctx.font = "24px system-ui"
            ctx.fillText("connecting…", 40, 60)
            return
        }
        this.scale = canvas.width / this.virtualWidth()
        const s = this.scale

        // text box and typed text
        const tb = lay.text_box
        ctx.fillStyle = TEXTBOX_FILL
        ctx.fillRect(tb.x * s, tb.y * s, tb.w * s, tb.h * s)
        ctx.fillStyle = KEY_TEXT
        const charPx = lay.char_advance * s
        ctx.font = `${Math.floor(charPx * 1.2)}px ui-monospace, monospace`
        ctx.textBaseline = "middle"
        for (let i = 0; i < store.text.length; i++) {
            const c = charCenter(lay, i + 1)
            ctx.fillText(store.text[i] ?? "", (c.x - lay.char_advance / 2) * s, c.y * s)
        }

        // calibration zone circle around the last typed character
        if (store.text.length > 0 && store.config) {
            const c = charCenter(lay, store.text.length)
            ctx.beginPath()
            ctx.strokeStyle = ZONE_STROKE
            ctx.lineWidth = store.zoneHit ? 3 : 1
            ctx.setLineDash(store.zoneHit ? [] : [6, 6])
            ctx.arc(c.x * s, c.y * s, store.config.tau * s, 0, Math.PI * 2)
            ctx.stroke()
            ctx.setLineDash([])
        }

        // keys
        ctx.textAlign = "center"
        for (const key of lay.keys) {
            const flashing = store.flash && store.flash.label === key.label && now < store.flash.until_t
            ctx.fillStyle = flashing ? FLASH_RED : KEY_FILL
            ctx.fillRect(key.x * s, key.y * s, key.w * s, key.h * s)
            ctx.strokeStyle = KEY_EDGE
            ctx.lineWidth = 1
            ctx.strokeRect(key.x * s, key.y * s, key.w * s, key.h * s)

            // dwell progress: the green rect shrinks toward the key center
            if (store.dwellKey === key.label && store.dwellProgress > 0 && !flashing) {
                const shrink = store.dwellProgress
                const w = key.w * (1 - shrink) * s
                const h = key.h * (1 - shrink) * s
                const cx = (key.x + key.w / 2) * s
                const cy = (key.y + key.h / 2) * s
                ctx.strokeStyle = DWELL_GREEN
                ctx.lineWidth = 3
                ctx.strokeRect(cx - w / 2, cy - h / 2, w, h)
            }

            ctx.fillStyle = KEY_TEXT
            const label = key.label === "SPACE" ? "␣" : key.label === "BACKSPACE" ? "⌫" : key.label
            ctx.font = `${Math.floor(28 * s * 2)}px system-ui`
            ctx.fillText(label, (key.x + key.w / 2) * s, (key.y + key.h / 2) * s)
        }
        ctx.textAlign = "left"

        // raw cursor (hollow): where the mouse actually is
        if (store.rawCursor) {
            ctx.beginPath()
            ctx.strokeStyle = "rgba(255,255,255,0.65)"
            ctx.lineWidth = 1.5
            ctx.arc(store.rawCursor.x * s, store.rawCursor.y * s, 7, 0, Math.PI * 2)
            ctx.stroke()
        }

        // calibrated cursor (red dot): exactly the last STATE's cal_x/cal_y
        if (store.calCursor) {
            ctx.beginPath()
            ctx.fillStyle = "#e03c3c"
            ctx.arc(store.calCursor.x * s, store.calCursor.y * s, 6, 0, Math.PI * 2)
            ctx.fill()
        }
    }
}
