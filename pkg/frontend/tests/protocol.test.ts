import { describe, expect, it } from "vitest"

import { charCenter, decodeLine, encodeLine, keyCenter } from "../src/protocol.js"

describe("protocol codec", () => {
    it("encodes client messages as single JSON lines", () => {
        const line = encodeLine({ kind: "SAMPLE", t_ms: 17, x: 1.5, y: 2 })
        expect(line.endsWith("\n")).toBe(true)
        expect(JSON.parse(line)).toEqual({ kind: "SAMPLE", t_ms: 17, x: 1.5, y: 2 })
    })

    it("decodes known server kinds", () => {
        const msg = decodeLine('{"kind":"CALIBRATION","eps_x":74.5,"eps_y":0,"updated":true}\n')
        expect(msg.kind).toBe("CALIBRATION")
        if (msg.kind === "CALIBRATION") {
            expect(msg.eps_x).toBeCloseTo(74.5)
        }
    })

    it("rejects unknown kinds and junk", () => {
        expect(() => decodeLine('{"kind":"NOPE"}')).toThrow(/unknown server message/)
        expect(() => decodeLine("")).toThrow(/empty/)
        expect(() => decodeLine("garbage")).toThrow()
    })

    it("computes character and key centers", () => {
        const layout = {
            keys: [{ label: "a", x: 10, y: 100, w: 20, h: 40 }],
            text_box: { x: 100, y: 0, w: 800, h: 120 },
            char_advance: 20,
        }
        expect(charCenter(layout, 1)).toEqual({ x: 110, y: 60 })
        expect(charCenter(layout, 2)).toEqual({ x: 130, y: 60 })
        expect(keyCenter(layout.keys[0]!)).toEqual({ x: 20, y: 120 })
    })
})
