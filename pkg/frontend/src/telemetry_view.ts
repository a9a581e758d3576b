// Correction-over-time sparkline: one trace per axis of the applied
// correction, plus a live readout. Curves freeze when autocalibration is
// toggled off because the server stops emitting CALIBRATION messages.

import { UiStore } from "./state.js"

export class TelemetryView {
    private ctx: CanvasRenderingContext2D

    constructor(private canvas: HTMLCanvasElement, private store: UiStore, private maxPoints = 600) {
        const ctx = canvas.getContext("2d")
        if (!ctx) {
            throw new Error("2d canvas unavailable")
        }
        this.ctx = ctx
    }

    render(): void {
        const { ctx, canvas, store } = this
        const w = canvas.width
        const h = canvas.height
        ctx.clearRect(0, 0, w, h)
        ctx.fillStyle = "#1a1d24"
        ctx.fillRect(0, 0, w, h)

        const bound = store.config ? store.config.bound : 200
        const history = store.epsHistory.slice(-this.maxPoints)
        const midY = h / 2
        const yOf = (v: number) => midY - (v / bound) * (h / 2 - 6)

        ctx.strokeStyle = "#3a4150"
        ctx.lineWidth = 1
        ctx.beginPath()
        ctx.moveTo(0, midY)
        ctx.lineTo(w, midY)
        ctx.stroke()

        const drawTrace = (pick: (p: { eps_x: number; eps_y: number }) => number, color: string) => {
            if (history.length === 0) {
                // no updates yet: flat zero line
                ctx.strokeStyle = color
                ctx.beginPath()
                ctx.moveTo(0, yOf(0))
                ctx.lineTo(w, yOf(0))
                ctx.stroke()
                return
            }
            ctx.strokeStyle = color
            ctx.lineWidth = 1.5
            ctx.beginPath()
            history.forEach((p, i) => {
                const x = history.length > 1 ? (i / (history.length - 1)) * w : w
                const y = yOf(pick(p))
                if (i === 0) {
                    ctx.moveTo(x, y)
                } else {
                    ctx.lineTo(x, y)
                }
            })
            ctx.stroke()
        }
        drawTrace((p) => p.eps_x, "#6fb3ff")
        drawTrace((p) => p.eps_y, "#74d68c")

        ctx.fillStyle = "#e8eaf0"
        ctx.font = "13px ui-monospace, monospace"
        ctx.fillText(
            `correction x=${store.lastEps.x.toFixed(1)}  y=${store.lastEps.y.toFixed(1)} px` +
                (store.autocalOn ? "" : "  (frozen)") +
                (store.zoneHit ? "  ● zone" : ""),
            8,
            16,
        )
    }
}
