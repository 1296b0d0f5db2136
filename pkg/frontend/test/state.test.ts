import { describe, expect, it } from "vitest";

import { applySnapshot, applyStatus, initialState, queueEdit } from "../src/state.js";
import { Snapshot } from "../src/types.js";

function snap(tick: number, mode: "live" | "virtual" = "virtual"): Snapshot {
	return {
		type: "snapshot",
		tick,
		t_s: tick / 30,
		mode,
		occupied: false,
		centroid_x: null,
		activity_ratio: 0,
		region: null,
		dwell_ms: 0,
		base: [0, 0, 0, 0],
		panels: [0, 0, 0, 0, 0, 0, 0, 0],
		angles: [0, 0, 0, 0, 0, 0, 0, 0],
		link_ok: true,
		failsafe: false,
	};
}

describe("console state", () => {
	it("starts connecting with nothing to show", () => {
		const s = initialState();
		expect(s.status).toBe("connecting");
		expect(s.snapshot).toBeNull();
		expect(s.pending).toEqual([]);
	});

	it("tracks connection status transitions", () => {
		let s = initialState();
		s = applyStatus(s, "open");
		expect(s.status).toBe("open");
		s = applyStatus(s, "closed");
		expect(s.status).toBe("closed");
	});

	it("mode follows the snapshot, not local wishes", () => {
		let s = initialState();
		s = applySnapshot(s, snap(1, "live"));
		expect(s.mode).toBe("live");
		s = applySnapshot(s, snap(2, "virtual"));
		expect(s.mode).toBe("virtual");
	});

	it("an edit stays pending until a newer snapshot arrives", () => {
		let s = initialState();
		s = applySnapshot(s, snap(10));
		s = queueEdit(s, { type: "set_param", name: "wave.rise_rate", value: 0.5 });
		expect(s.pending).toHaveLength(1);
		// same tick again: still pending (runtime has not ticked past it)
		s = applySnapshot(s, snap(10));
		expect(s.pending).toHaveLength(1);
		s = applySnapshot(s, snap(11));
		expect(s.pending).toHaveLength(0);
	});

	it("edits queued while disconnected clear on the first snapshot", () => {
		let s = initialState();
		s = queueEdit(s, { type: "virtual_visitor", x: 0.5 });
		expect(s.pending).toHaveLength(1);
		s = applySnapshot(s, snap(3));
		expect(s.pending).toHaveLength(0);
	});
});
