/** DPR-aware canvas rendering of the panel view model. */

import { PanelViewModel } from "./viewmodel.js";

const BAR_COLOR = "#3aa7c9";
const BAR_TOP = "#7fd4ee";
const HIGHLIGHT = "rgba(255, 214, 90, 0.18)";
const GRID = "#2b3a42";
const MARKER = "#ffd65a";

export function syncCanvasSize(canvas: HTMLCanvasElement, width: number, height: number): CanvasRenderingContext2D {
	const dpr = window.devicePixelRatio || 1;
	canvas.width = Math.round(width * dpr);
	canvas.height = Math.round(height * dpr);
	canvas.style.width = `${width}px`;
	canvas.style.height = `${height}px`;
	const ctx = canvas.getContext("2d")!;
	ctx.scale(dpr, dpr);
	return ctx;
}

export function drawPanel(
	ctx: CanvasRenderingContext2D,
	vm: PanelViewModel,
	width: number,
	height: number,
	virtualX: number | null,
): void {
	ctx.clearRect(0, 0, width, height);

	if (!vm.connected) {
		ctx.fillStyle = "#888";
		ctx.font = "14px system-ui, sans-serif";
		ctx.textAlign = "center";
		ctx.fillText("waiting for runtime…", width / 2, height / 2);
		return;
	}

	// occupied-region wash
	if (vm.highlightRegion !== null && vm.regionBounds.length > vm.highlightRegion + 1) {
		const x0 = vm.regionBounds[vm.highlightRegion] * width;
		const x1 = vm.regionBounds[vm.highlightRegion + 1] * width;
		ctx.fillStyle = HIGHLIGHT;
		ctx.fillRect(x0, 0, x1 - x0, height);
	}

	// region boundaries
	ctx.strokeStyle = GRID;
	ctx.lineWidth = 1;
	for (const b of vm.regionBounds) {
		const x = b * width;
		ctx.beginPath();
		ctx.moveTo(x, 0);
		ctx.lineTo(x, height);
		ctx.stroke();
	}

	// panel bars, heights straight from the snapshot
	const m = vm.bars.length;
	if (m > 0) {
		const slot = width / m;
		const barW = slot * 0.7;
		for (let j = 0; j < m; j++) {
			const h = vm.bars[j] * (height - 20);
			const x = j * slot + (slot - barW) / 2;
			ctx.fillStyle = BAR_COLOR;
			ctx.fillRect(x, height - h, barW, h);
			ctx.fillStyle = BAR_TOP;
			ctx.fillRect(x, height - h, barW, Math.min(4, h));
		}
	}

	// detected centroid tick along the bottom
	if (vm.occupied && vm.centroidX !== null) {
		ctx.fillStyle = "#e06050";
		ctx.beginPath();
		ctx.arc(vm.centroidX * width, height - 6, 5, 0, Math.PI * 2);
		ctx.fill();
	}

	// virtual-visitor marker (draggable, drawn only in virtual mode)
	if (vm.mode === "virtual" && virtualX !== null) {
		const x = virtualX * width;
		ctx.strokeStyle = MARKER;
		ctx.lineWidth = 2;
		ctx.beginPath();
		ctx.moveTo(x, 0);
		ctx.lineTo(x, height);
		ctx.stroke();
		ctx.fillStyle = MARKER;
		ctx.beginPath();
		ctx.arc(x, 14, 8, 0, Math.PI * 2);
		ctx.fill();
	}
}
