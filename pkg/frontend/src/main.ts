/** Bootstrap: wire the link, state, canvas, sliders and marker together. */

import { drawPanel, syncCanvasSize } from "./canvas.js";
import { ConsoleLink } from "./link.js";
import { PositionThrottle } from "./ratelimit.js";
import { SLIDERS, buildSliderRow } from "./sliders.js";
import {
	ConsoleState,
	applySnapshot,
	applyStatus,
	initialState,
	queueEdit,
} from "./state.js";
import { ControlMessage, parseSnapshot } from "./types.js";
import { renderPanel } from "./viewmodel.js";

const TICK_HZ = 30;

let state: ConsoleState = initialState();

const canvas = document.getElementById("panel") as HTMLCanvasElement;
const statusEl = document.getElementById("status")!;
const failsafeEl = document.getElementById("failsafe")!;
const dwellEl = document.getElementById("dwell")!;
const regionEl = document.getElementById("region")!;
const pendingEl = document.getElementById("pending")!;
const modeButton = document.getElementById("mode-toggle") as HTMLButtonElement;
const slidersEl = document.getElementById("sliders")!;

const W = 720;
const H = 320;
const ctx = syncCanvasSize(canvas, W, H);

const proto = location.protocol === "https:" ? "wss" : "ws";
const link = new ConsoleLink(`${proto}://${location.host}/ws`, {
	onMessage(data) {
		const snap = parseSnapshot(data);
		if (snap) state = applySnapshot(state, snap);
	},
	onStatus(status) {
		state = applyStatus(state, status);
	},
});

function sendEdit(msg: ControlMessage): void {
	state = queueEdit(state, msg);
	link.send(msg);
}

for (const spec of SLIDERS) {
	slidersEl.appendChild(buildSliderRow(spec, sendEdit));
}

modeButton.addEventListener("click", () => {
	const next = state.mode === "virtual" ? "live" : "virtual";
	sendEdit({ type: "mode", mode: next });
});

// -- draggable virtual-visitor marker ---------------------------------------

const throttle = new PositionThrottle(TICK_HZ);
let dragging = false;

function markerFromEvent(ev: PointerEvent): number {
	const rect = canvas.getBoundingClientRect();
	return Math.min(1, Math.max(0, (ev.clientX - rect.left) / rect.width));
}

function offerPosition(x: number | null): void {
	const out = throttle.offer(x, performance.now());
	if (out !== undefined) link.send({ type: "virtual_visitor", x: out });
}

canvas.addEventListener("pointerdown", (ev) => {
	if (state.mode !== "virtual") return;
	dragging = true;
	canvas.setPointerCapture(ev.pointerId);
	state.virtualX = markerFromEvent(ev);
	offerPosition(state.virtualX);
});
canvas.addEventListener("pointermove", (ev) => {
	if (!dragging) return;
	state.virtualX = markerFromEvent(ev);
	offerPosition(state.virtualX);
});
canvas.addEventListener("pointerup", () => {
	dragging = false;
});
canvas.addEventListener("dblclick", () => {
	if (state.mode !== "virtual") return;
	state.virtualX = null;
	offerPosition(null); // visitor walks away
});

// -- per-frame refresh -------------------------------------------------------

function refresh(): void {
	const held = throttle.flush(performance.now());
	if (held !== undefined) link.send({ type: "virtual_visitor", x: held });

	const vm = renderPanel(state.snapshot);
	drawPanel(ctx, vm, W, H, state.mode === "virtual" ? state.virtualX : null);

	statusEl.textContent = state.status === "open" ? `connected (tick ${vm.tick})` : state.status;
	statusEl.className = state.status === "open" ? "ok" : "warn";
	failsafeEl.hidden = !vm.failsafe;
	dwellEl.textContent = vm.connected ? `${vm.dwellSeconds.toFixed(1)} s` : "–";
	regionEl.textContent = vm.highlightRegion === null ? "vacant" : `region ${vm.highlightRegion}`;
	const pending = state.pending.length + link.pendingCount();
	pendingEl.textContent = pending > 0 ? `${pending} edit(s) pending` : "";
	modeButton.textContent = state.mode === "virtual" ? "switch to live" : "switch to virtual";

	requestAnimationFrame(refresh);
}

link.connect();
requestAnimationFrame(refresh);
