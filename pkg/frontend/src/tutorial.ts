import { frameLoop } from "./clock.js";
import { CHART_BACKGROUND, renderChart } from "./chart.js";
import type { StepIO } from "./io.js";
import type { PathSample, StepOutcome, TutorialStepWire } from "./types.js";

/** Linear interpolation along the tutorial path at t seconds. Clamped to
 * the path's ends, so t < 0 gives the start and t past the last sample
 * holds the final position. Samples are evenly spaced, which lets the
 * segment be found by index rather than search. */
export function positionAt(path: PathSample[], t: number): { x: number; y: number } {
  if (path.length === 0) throw new Error("empty tutorial path");
  const first = path[0];
  const last = path[path.length - 1];
  if (t <= first[0]) return { x: first[1], y: first[2] };
  if (t >= last[0]) return { x: last[1], y: last[2] };
  const step = (last[0] - first[0]) / (path.length - 1);
  let i = Math.floor((t - first[0]) / step);
  if (i >= path.length - 1) i = path.length - 2;
  const [t0, x0, y0] = path[i];
  const [t1, x1, y1] = path[i + 1];
  // guard against float edge where t lands a hair before sample i
  if (t < t0) return { x: x0, y: y0 };
  const a = t1 > t0 ? (t - t0) / (t1 - t0) : 0;
  return { x: x0 + a * (x1 - x0), y: y0 + a * (y1 - y0) };
}

/** Drive one screening step: animate the colored letter along its path for
 * its configured duration, swap to the chart for chartSeconds, then show an
 * empty input and wait for the response. All timestamps come from frames
 * that actually rendered, so drift is measured rather than assumed. */
export async function runTutorialStep(
  io: StepIO,
  step: TutorialStepWire,
): Promise<StepOutcome> {
  const tut = step.tutorial;
  const { clock, scheduler, surface, input, rect } = io;
  const sx = rect.width / tut.chart.params.frame_width;
  const sy = rect.height / tut.chart.params.frame_height;
  const fontPx = tut.chart.params.font_size * sy;
  const durationMs = tut.duration * 1000;

  const animationStart = clock.now();
  const drawLetter = (t: number) => {
    const pos = positionAt(tut.path, t / 1000);
    surface.clear(CHART_BACKGROUND);
    surface.drawText(tut.letter, rect.x + pos.x * sx, rect.y + pos.y * sy, fontPx, tut.color);
  };
  drawLetter(0);
  const animationEnd = await frameLoop(scheduler, clock, (now) => {
    const t = now - animationStart;
    drawLetter(t);
    return t >= durationMs;
  });

  // the letter has stopped; replace the stage with the chart
  renderChart(surface, tut.chart, rect);
  const chartShown = clock.now();
  const chartHidden = await frameLoop(scheduler, clock, (now) => {
    return now - chartShown >= step.chart_seconds * 1000;
  });
  surface.clear(CHART_BACKGROUND);

  input.value = "";
  input.show();
  const valueAtDisplay = input.value;
  const text = await io.collectResponse();
  const submitted = clock.now();
  input.hide();

  return {
    text,
    input_value_at_display: valueAtDisplay,
    timestamps: {
      animation_started_at: animationStart,
      animation_ended_at: animationEnd,
      chart_shown_at: chartShown,
      chart_hidden_at: chartHidden,
      response_submitted_at: submitted,
    },
  };
}
