/**
 * Console state: connection status, the latest snapshot, pending edits.
 *
 * The console never simulates or extrapolates; everything rendered comes
 * from the most recent snapshot, and a pending edit stays "pending" until
 * a snapshot arrives after it was sent (snapshot-authoritative UI).
 */

import { ControlMessage, Snapshot } from "./types.js";

export type ConnectionStatus = "connecting" | "open" | "closed";

export interface PendingEdit {
	message: ControlMessage;
	sentTick: number | null; // tick of the newest snapshot when queued/sent
}

export interface ConsoleState {
	status: ConnectionStatus;
	snapshot: Snapshot | null;
	pending: PendingEdit[];
	virtualX: number | null;
	mode: "live" | "virtual";
}

export function initialState(): ConsoleState {
	return { status: "connecting", snapshot: null, pending: [], virtualX: null, mode: "live" };
}

export function applySnapshot(state: ConsoleState, snapshot: Snapshot): ConsoleState {
	// edits queued before this snapshot's tick are now reflected (or
	// rejected) by the runtime; either way they are no longer pending
	const pending = state.pending.filter(
		(e) => e.sentTick !== null && snapshot.tick <= e.sentTick,
	);
	return { ...state, snapshot, pending, mode: snapshot.mode };
}

export function applyStatus(state: ConsoleState, status: ConnectionStatus): ConsoleState {
	return { ...state, status };
}

export function queueEdit(state: ConsoleState, message: ControlMessage): ConsoleState {
	const sentTick = state.snapshot ? state.snapshot.tick : null;
	return { ...state, pending: [...state.pending, { message, sentTick }] };
}
