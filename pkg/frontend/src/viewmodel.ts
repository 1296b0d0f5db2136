/**
 * Pure translation of a snapshot into what the panel view draws.
 *
 * Keeping this a data-to-data function is what the snapshot-fidelity
 * tests lean on: every displayed number is traceable to a snapshot field.
 */

import { Snapshot } from "./types.js";

export interface PanelViewModel {
	connected: boolean;
	bars: number[]; // one height in [0,1] per panel, straight from panels[]
	regionBounds: number[]; // n+1 normalized x positions of region edges
	highlightRegion: number | null; // occupied region, second-from-left = 1
	dwellSeconds: number;
	occupied: boolean;
	centroidX: number | null;
	failsafe: boolean;
	linkOk: boolean;
	mode: "live" | "virtual";
	tick: number;
}

export function disconnectedView(): PanelViewModel {
	return {
		connected: false,
		bars: [],
		regionBounds: [],
		highlightRegion: null,
		dwellSeconds: 0,
		occupied: false,
		centroidX: null,
		failsafe: false,
		linkOk: false,
		mode: "live",
		tick: -1,
	};
}

export function renderPanel(snapshot: Snapshot | null): PanelViewModel {
	if (!snapshot) return disconnectedView();
	const n = snapshot.base.length;
	const bounds: number[] = [];
	for (let i = 0; i <= n; i++) bounds.push(i / n);
	return {
		connected: true,
		bars: snapshot.panels.slice(),
		regionBounds: bounds,
		highlightRegion: snapshot.region,
		dwellSeconds: snapshot.dwell_ms / 1000,
		occupied: snapshot.occupied,
		centroidX: snapshot.centroid_x,
		failsafe: snapshot.failsafe,
		linkOk: snapshot.link_ok,
		mode: snapshot.mode,
		tick: snapshot.tick,
	};
}
