/**
 * WebSocket link to the runtime with reconnect and an offline edit queue.
 *
 * While disconnected, control edits queue up (shown as pending in the
 * UI) and flush in order on reconnect. Reconnect backs off exponentially
 * up to 10 s.
 */

import { ControlMessage } from "./types.js";

export interface LinkCallbacks {
	onMessage(data: unknown): void;
	onStatus(status: "connecting" | "open" | "closed"): void;
}

type SocketFactory = (url: string) => WebSocket;

export class ConsoleLink {
	private url: string;
	private cb: LinkCallbacks;
	private makeSocket: SocketFactory;
	private ws: WebSocket | null = null;
	private backoffMs = 500;
	private queue: ControlMessage[] = [];
	private closed = false;
	private timer: ReturnType<typeof setTimeout> | null = null;

	constructor(url: string, cb: LinkCallbacks, makeSocket?: SocketFactory) {
		this.url = url;
		this.cb = cb;
		this.makeSocket = makeSocket ?? ((u) => new WebSocket(u));
	}

	connect(): void {
		this.cb.onStatus("connecting");
		const ws = this.makeSocket(this.url);
		this.ws = ws;
		ws.onopen = () => {
			this.backoffMs = 500;
			this.cb.onStatus("open");
			const held = this.queue;
			this.queue = [];
			for (const msg of held) this.send(msg);
		};
		ws.onmessage = (ev) => {
			try {
				this.cb.onMessage(JSON.parse(String(ev.data)));
			} catch {
				// non-JSON frames are ignored
			}
		};
		ws.onclose = () => {
			this.ws = null;
			this.cb.onStatus("closed");
			this.scheduleReconnect();
		};
		ws.onerror = () => {
			ws.close();
		};
	}

	private scheduleReconnect(): void {
		if (this.closed) return;
		this.timer = setTimeout(() => this.connect(), this.backoffMs);
		this.backoffMs = Math.min(this.backoffMs * 2, 10_000);
	}

	/** Send now if connected; otherwise hold. Returns true when sent. */
	send(msg: ControlMessage): boolean {
		if (this.ws && this.ws.readyState === this.ws.OPEN) {
			this.ws.send(JSON.stringify(msg));
			return true;
		}
		this.queue.push(msg);
		return false;
	}

	pendingCount(): number {
		return this.queue.length;
	}

	close(): void {
		this.closed = true;
		if (this.timer !== null) clearTimeout(this.timer);
		this.ws?.close();
	}
}
