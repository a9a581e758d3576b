// DOM-free UI state store. All calibration logic lives server-side: the
// rendered calibrated cursor is always the last STATE message's values,
// never extrapolated locally.

import { LayoutPayload, ConfigPayload, ServerMessage } from "./protocol.js"

export interface EpsPoint {
    eps_x: number
    eps_y: number
    updated: boolean
}

export interface FlashState {
    label: string
    until_t: number // wall-clock ms when the activation flash expires
}

export class UiStore {
    connected = false
    layout: LayoutPayload | null = null
    config: ConfigPayload | null = null

    // cursor (raw = last sample we sent, cal = last STATE from the server)
    rawCursor: { x: number; y: number } | null = null
    calCursor: { x: number; y: number } | null = null

    dwellKey: string | null = null
    dwellProgress = 0
    text = ""
    zoneHit = false

    epsHistory: EpsPoint[] = []
    lastEps: { x: number; y: number } = { x: 0, y: 0 }

    activations: string[] = []
    flash: FlashState | null = null

    offset = { dx: 0, dy: 0 }
    autocalOn = true
    lastError: string | null = null

    private listeners: (() => void)[] = []

    subscribe(cb: () => void): void {
        this.listeners.push(cb)
    }

    private emit(): void {
        for (const cb of this.listeners) {
            cb()
        }
    }

    noteSampleSent(x: number, y: number): void {
        this.rawCursor = { x, y }
        this.emit()
    }

    noteOffset(dx: number, dy: number): void {
        this.offset = { dx, dy }
        this.emit()
    }

    noteToggle(on: boolean): void {
        this.autocalOn = on
        this.emit()
    }

    applyServer(msg: ServerMessage, now = 0): void {
        switch (msg.kind) {
            case "HELLO":
                this.connected = true
                this.layout = msg.layout
                this.config = msg.config
                this.epsHistory = []
                this.text = ""
                this.lastEps = { x: 0, y: 0 }
                break
            case "STATE":
                this.calCursor = { x: msg.cal_x, y: msg.cal_y }
                this.dwellKey = msg.dwell.key
                this.dwellProgress = msg.dwell.progress
                this.text = msg.text
                this.zoneHit = msg.zone_hit
                this.lastEps = { x: msg.eps_x, y: msg.eps_y }
                break
            case "ACTIVATION":
                this.activations.push(msg.label)
                this.flash = { label: msg.label, until_t: now + 200 }
                break
            case "CALIBRATION":
                this.epsHistory.push({ eps_x: msg.eps_x, eps_y: msg.eps_y, updated: msg.updated })
                break
            case "ERROR":
                this.lastError = msg.message
                break
        }
        this.emit()
    }
}
