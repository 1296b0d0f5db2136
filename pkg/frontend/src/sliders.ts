/** Parameter sliders: dotted runtime names, ranges, live-value labels. */

import { ControlMessage } from "./types.js";

export interface SliderSpec {
	name: string; // dotted parameter path understood by the runtime
	label: string;
	min: number;
	max: number;
	step: number;
	initial: number;
}

export const SLIDERS: SliderSpec[] = [
	{ name: "wave.rise_rate", label: "rise rate [1/s]", min: 0.05, max: 1.5, step: 0.05, initial: 0.25 },
	{ name: "wave.decay_rate", label: "decay rate [1/s]", min: 0.0, max: 1.5, step: 0.05, initial: 0.15 },
	{ name: "wave.coupling", label: "neighbor coupling [1/s]", min: 0.0, max: 3.0, step: 0.1, initial: 0.8 },
	{ name: "wave.ripple_amplitude", label: "ripple amplitude", min: 0.0, max: 0.5, step: 0.01, initial: 0.15 },
	{ name: "wave.ripple_frequency", label: "ripple frequency [Hz]", min: 0.0, max: 2.0, step: 0.05, initial: 0.4 },
	{ name: "occupancy.debounce_ms", label: "region debounce [ms]", min: 50, max: 1500, step: 50, initial: 300 },
	{ name: "occupancy.vacancy_timeout_ms", label: "vacancy timeout [ms]", min: 200, max: 5000, step: 100, initial: 1500 },
	{ name: "vision.diff_threshold", label: "presence threshold", min: 5, max: 120, step: 1, initial: 20 },
];

export function sliderMessage(spec: SliderSpec, value: number): ControlMessage {
	return { type: "set_param", name: spec.name, value };
}

export function buildSliderRow(
	spec: SliderSpec,
	send: (msg: ControlMessage) => void,
): HTMLElement {
	const row = document.createElement("label");
	row.className = "slider-row";
	const title = document.createElement("span");
	title.textContent = spec.label;
	const value = document.createElement("span");
	value.className = "slider-value";
	value.textContent = String(spec.initial);
	const input = document.createElement("input");
	input.type = "range";
	input.min = String(spec.min);
	input.max = String(spec.max);
	input.step = String(spec.step);
	input.value = String(spec.initial);
	input.addEventListener("change", () => {
		const v = Number(input.value);
		value.textContent = String(v);
		send(sliderMessage(spec, v));
	});
	input.addEventListener("input", () => {
		value.textContent = input.value;
	});
	row.append(title, input, value);
	return row;
}
