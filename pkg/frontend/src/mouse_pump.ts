// ~60 Hz sample sources with strictly increasing integer timestamps.
// Live mode samples the mouse; replay mode plays back a t_ms,x,y trace CSV.

export type SampleSink = (t_ms: number, x: number, y: number) => void

export class MousePump {
    private timer: ReturnType<typeof setInterval> | null = null
    private lastT = -1
    private pos: { x: number; y: number } | null = null

    constructor(private sink: SampleSink, private periodMs = 16) {}

    updatePosition(x: number, y: number): void {
        this.pos = { x, y }
    }

    start(): void {
        if (this.timer) {
            return
        }
        const t0 = performance.now()
        this.timer = setInterval(() => {
            if (!this.pos) {
                return
            }
            let t = Math.round(performance.now() - t0)
            if (t <= this.lastT) {
                t = this.lastT + 1
            }
            this.lastT = t
            this.sink(t, this.pos.x, this.pos.y)
        }, this.periodMs)
    }

    stop(): void {
        if (this.timer) {
            clearInterval(this.timer)
            this.timer = null
        }
    }
}

export interface TraceRow {
    t_ms: number
    x: number
    y: number
}

export function parseTraceCsv(text: string): TraceRow[] {
    const rows: TraceRow[] = []
    const lines = text.split("\n")
    let start = 0
    if (lines[0]?.replace(/\s/g, "").toLowerCase() === "t_ms,x,y") {
        start = 1
    }
    for (let i = start; i < lines.length; i++) {
        const line = lines[i]?.trim()
        if (!line) {
            continue
        }
        const parts = line.split(",")
        if (parts.length !== 3) {
            throw new Error(`trace line ${i + 1}: expected t_ms,x,y`)
        }
        const t_ms = Number(parts[0])
        const x = Number(parts[1])
        const y = Number(parts[2])
        if (!Number.isFinite(t_ms) || !Number.isFinite(x) || !Number.isFinite(y)) {
            throw new Error(`trace line ${i + 1}: non-numeric field`)
        }
        rows.push({ t_ms, x, y })
    }
    return rows
}

// plays a recorded trace in real time (scaled by `speed`)
export class TraceReplayer {
    private timer: ReturnType<typeof setTimeout> | null = null

    constructor(private sink: SampleSink, private onDone: () => void) {}

    play(rows: TraceRow[], speed = 1): void {
        this.stop()
        if (rows.length === 0) {
            this.onDone()
            return
        }
        const t0 = rows[0]!.t_ms
        let i = 0
        const step = () => {
            const row = rows[i]
            if (!row) {
                this.timer = null
                this.onDone()
                return
            }
            this.sink(row.t_ms, row.x, row.y)
            i += 1
            const next = rows[i]
            if (next) {
                this.timer = setTimeout(step, (next.t_ms - row.t_ms) / speed)
            } else {
                this.timer = null
                this.onDone()
            }
        }
        this.timer = setTimeout(step, 0)
        void t0
    }

    stop(): void {
        if (this.timer) {
            clearTimeout(this.timer)
            this.timer = null
        }
    }
}
