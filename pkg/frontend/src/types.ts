/** Message vocabulary shared with the runtime's /ws endpoint. */

export interface Snapshot {
	type: "snapshot";
	tick: number;
	t_s: number;
	mode: "live" | "virtual";
	occupied: boolean;
	centroid_x: number | null;
	activity_ratio: number;
	region: number | null;
	dwell_ms: number;
	base: number[];
	panels: number[];
	angles: number[];
	link_ok: boolean;
	failsafe: boolean;
}

export type ControlMessage =
	| { type: "set_param"; name: string; value: number }
	| { type: "virtual_visitor"; x: number | null }
	| { type: "mode"; mode: "live" | "virtual" };

export function parseSnapshot(raw: unknown): Snapshot | null {
	if (typeof raw !== "object" || raw === null) return null;
	const msg = raw as Record<string, unknown>;
	if (msg.type !== "snapshot") return null;
	if (!Array.isArray(msg.base) || !Array.isArray(msg.panels) || !Array.isArray(msg.angles)) {
		return null;
	}
	if (typeof msg.tick !== "number" || typeof msg.mode !== "string") return null;
	return msg as unknown as Snapshot;
}
