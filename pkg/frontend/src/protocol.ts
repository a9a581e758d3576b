// Message types for the engine's line-delimited JSON protocol (PROTOCOL.md).
// Field names and framing are a bit-exact contract with the server.

export interface KeyRect {
    label: string
    x: number
    y: number
    w: number
    h: number
}

export interface LayoutPayload {
    keys: KeyRect[]
    text_box: { x: number; y: number; w: number; h: number }
    char_advance: number
}

export interface ConfigPayload {
    tau: number
    window: number
    bound: number
    fixation_min_duration_ms: number
    saccade_velocity_threshold: number
}

export interface HelloReply {
    kind: "HELLO"
    layout: LayoutPayload
    config: ConfigPayload
}

export interface StateMsg {
    kind: "STATE"
    cal_x: number
    cal_y: number
    eps_x: number
    eps_y: number
    dwell: { key: string | null; progress: number }
    text: string
    zone_hit: boolean
}

export interface ActivationMsg {
    kind: "ACTIVATION"
    label: string
    t_ms: number
}

export interface CalibrationMsg {
    kind: "CALIBRATION"
    eps_x: number
    eps_y: number
    updated: boolean
}

export interface ErrorMsg {
    kind: "ERROR"
    message: string
}

export type ServerMessage = HelloReply | StateMsg | ActivationMsg | CalibrationMsg | ErrorMsg

export type ClientMessage =
    | { kind: "HELLO"; screen?: { width: number; height: number; sample_rate_hz: number }; config?: Partial<ConfigPayload> }
    | { kind: "SAMPLE"; t_ms: number; x: number; y: number }
    | { kind: "SET_OFFSET"; dx: number; dy: number }
    | { kind: "TOGGLE_AUTOCAL"; enabled: boolean }
    | { kind: "RESET" }

const SERVER_KINDS = new Set(["HELLO", "STATE", "ACTIVATION", "CALIBRATION", "ERROR"])

export function encodeLine(msg: ClientMessage): string {
    return JSON.stringify(msg) + "\n"
}

export function decodeLine(line: string): ServerMessage {
    const trimmed = line.trim()
    if (!trimmed) {
        throw new Error("empty protocol line")
    }
    const parsed = JSON.parse(trimmed)
    if (typeof parsed !== "object" || parsed === null || !SERVER_KINDS.has(parsed.kind)) {
        throw new Error(`unknown server message: ${trimmed.slice(0, 80)}`)
    }
    return parsed as ServerMessage
}

// center of the n-th typed character (1-based) in the text box
export function charCenter(layout: LayoutPayload, nChar: number): { x: number; y: number } {
    return {
        x: layout.text_box.x + (nChar - 0.5) * layout.char_advance,
        y: layout.text_box.y + layout.text_box.h / 2,
    }
}

export function keyCenter(key: KeyRect): { x: number; y: number } {
    return { x: key.x + key.w / 2, y: key.y + key.h / 2 }
}
