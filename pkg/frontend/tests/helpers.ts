// Node-side test plumbing: a raw TCP transport (the browser uses the WS
// relay instead) and a spawner for the Python engine service.

import net from "node:net"
import { spawn, ChildProcess } from "node:child_process"
import type { Transport } from "../src/client.js"

export class TcpTransport implements Transport {
    private lineCb: ((line: string) => void) | null = null
    private closeCb: (() => void) | null = null
    private buffer = ""

    constructor(private sock: net.Socket) {
        sock.setNoDelay(true)
        sock.on("data", (chunk) => {
            this.buffer += chunk.toString("utf-8")
            let idx
            while ((idx = this.buffer.indexOf("\n")) >= 0) {
                const line = this.buffer.slice(0, idx)
                this.buffer = this.buffer.slice(idx + 1)
                if (line.trim()) {
                    this.lineCb?.(line)
                }
            }
        })
        sock.on("close", () => this.closeCb?.())
    }

    static connect(port: number, host = "127.0.0.1"): Promise<TcpTransport> {
        return new Promise((resolve, reject) => {
            const sock = net.createConnection({ host, port }, () => resolve(new TcpTransport(sock)))
            sock.once("error", reject)
        })
    }

    send(line: string): void {
        this.sock.write(line)
    }

    onLine(cb: (line: string) => void): void {
        this.lineCb = cb
    }

    onClose(cb: () => void): void {
        this.closeCb = cb
    }

    close(): void {
        this.sock.destroy()
    }
}

export interface EngineServer {
    port: number
    proc: ChildProcess
    stop(): void
}

export function startEngineServer(): Promise<EngineServer> {
    const python = process.env.PYTHON ?? "python3"
    const proc = spawn(python, ["-m", "gaze_autocal.cli", "serve", "--port", "0"], {
        stdio: ["ignore", "pipe", "pipe"],
    })
    return new Promise((resolve, reject) => {
        let out = ""
        const timer = setTimeout(() => reject(new Error(`engine server did not start: ${out}`)), 15000)
        proc.stdout!.on("data", (chunk) => {
            out += chunk.toString()
            const m = out.match(/listening on [\d.]+:(\d+)/)
            if (m) {
                clearTimeout(timer)
                resolve({
                    port: Number(m[1]),
                    proc,
                    stop: () => proc.kill("SIGINT"),
                })
            }
        })
        proc.stderr!.on("data", (chunk) => {
            out += chunk.toString()
        })
        proc.on("exit", (code) => {
            clearTimeout(timer)
            reject(new Error(`engine server exited early (${code}): ${out}`))
        })
    })
}

export function sleep(ms: number): Promise<void> {
    return new Promise((resolve) => setTimeout(resolve, ms))
}
