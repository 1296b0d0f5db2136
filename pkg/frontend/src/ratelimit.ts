/**
 * Drag messages go out at most once per animation frame and no faster
 * than the runtime tick rate; the last position always wins.
 */

export class PositionThrottle {
	private minIntervalMs: number;
	private lastSentAt = -Infinity;
	private pending: number | null | undefined = undefined;

	constructor(tickHz: number) {
		this.minIntervalMs = 1000 / tickHz;
	}

	/** Record a new position; returns the value to send now, if any. */
	offer(x: number | null, nowMs: number): number | null | undefined {
		if (nowMs - this.lastSentAt >= this.minIntervalMs) {
			this.lastSentAt = nowMs;
			this.pending = undefined;
			return x;
		}
		this.pending = x;
		return undefined;
	}

	/** Called each animation frame; flushes a held position when due. */
	flush(nowMs: number): number | null | undefined {
		if (this.pending === undefined) return undefined;
		if (nowMs - this.lastSentAt < this.minIntervalMs) return undefined;
		const out = this.pending;
		this.pending = undefined;
		this.lastSentAt = nowMs;
		return out;
	}
}
