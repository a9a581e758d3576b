// Transport-agnostic protocol client: frames lines, decodes replies,
// fans them out to handlers. The browser uses a WebSocket transport (one
// text frame per protocol line, relayed to the TCP service); tests use a
// raw TCP transport.

import { ClientMessage, ServerMessage, decodeLine, encodeLine } from "./protocol.js"

export interface Transport {
    send(line: string): void
    onLine(cb: (line: string) => void): void
    onClose(cb: () => void): void
    close(): void
}

export class WebSocketTransport implements Transport {
    private lineCb: ((line: string) => void) | null = null
    private closeCb: (() => void) | null = null
    private queue: string[] = []
    private open = false

    constructor(private ws: WebSocket) {
        ws.onopen = () => {
            this.open = true
            for (const line of this.queue.splice(0)) {
                ws.send(line)
            }
        }
        ws.onmessage = (ev) => {
            // the relay may batch several newline-terminated lines per frame
            for (const line of String(ev.data).split("\n")) {
                if (line.trim() && this.lineCb) {
                    this.lineCb(line)
                }
            }
        }
        ws.onclose = () => this.closeCb?.()
    }

    send(line: string): void {
        if (this.open) {
            this.ws.send(line)
        } else {
            this.queue.push(line)
        }
    }

    onLine(cb: (line: string) => void): void {
        this.lineCb = cb
    }

    onClose(cb: () => void): void {
        this.closeCb = cb
    }

    close(): void {
        this.ws.close()
    }
}

export class EngineClient {
    private handlers: ((msg: ServerMessage) => void)[] = []

    constructor(private transport: Transport) {
        transport.onLine((line) => {
            let msg: ServerMessage
            try {
                msg = decodeLine(line)
            } catch (err) {
                console.error("bad server line", err)
                return
            }
            for (const h of this.handlers) {
                h(msg)
            }
        })
    }

    onMessage(cb: (msg: ServerMessage) => void): void {
        this.handlers.push(cb)
    }

    send(msg: ClientMessage): void {
        this.transport.send(encodeLine(msg))
    }

    hello(screen?: { width: number; height: number; sample_rate_hz: number }): void {
        this.send(screen ? { kind: "HELLO", screen } : { kind: "HELLO" })
    }

    sample(t_ms: number, x: number, y: number): void {
        this.send({ kind: "SAMPLE", t_ms, x, y })
    }

    setOffset(dx: number, dy: number): void {
        this.send({ kind: "SET_OFFSET", dx, dy })
    }

    toggleAutocal(enabled: boolean): void {
        this.send({ kind: "TOGGLE_AUTOCAL", enabled })
    }

    reset(): void {
        this.send({ kind: "RESET" })
    }

    close(): void {
        this.transport.close()
    }
}
