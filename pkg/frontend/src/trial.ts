import { frameLoop } from "./clock.js";
import { CHART_BACKGROUND, renderChart } from "./chart.js";
import type { StepIO } from "./io.js";
import type { StepOutcome, TrialStepWire } from "./types.js";

/** The slice of a video element the trial driver needs. currentTime and
 * duration are in seconds to match the media element convention; the wire
 * format carries milliseconds. */
export interface MediaLike {
  readonly duration: number;
  currentTime: number;
  play(): void | Promise<void>;
  pause(): void;
}

export class MediaError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "MediaError";
  }
}

/** Drive one trial: seek to the clip start, play up to the frame of
 * interest, pause on it, overlay the chart for chart_seconds, then take
 * the response. The overlay is fully opaque: the chart replaces the frame
 * rather than annotating it, and the paused video stays underneath. */
export async function runTrialStep(
  io: StepIO,
  step: TrialStepWire,
  media: MediaLike,
): Promise<StepOutcome> {
  const { clock, scheduler, surface, input } = io;
  const trial = step.trial;
  const frameTimeS = trial.frame_time_ms / 1000;

  let videoStarted: number;
  let videoPaused: number;
  try {
    media.currentTime = trial.clip_start_ms / 1000;
    videoStarted = clock.now();
    await media.play();
    videoPaused = await frameLoop(scheduler, clock, () => {
      if (media.currentTime >= frameTimeS) {
        media.pause();
        // snap to the exact frame; overshoot is at most one frame of playback
        media.currentTime = frameTimeS;
        return true;
      }
      return false;
    });
  } catch (err) {
    throw new MediaError(`trial media failed: ${String(err)}`);
  }

  renderChart(surface, trial.chart, io.rect);
  const chartShown = clock.now();
  const chartHidden = await frameLoop(scheduler, clock, (now) => {
    return now - chartShown >= trial.chart_seconds * 1000;
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
      video_started_at: videoStarted,
      video_paused_at: videoPaused,
      chart_shown_at: chartShown,
      chart_hidden_at: chartHidden,
      response_submitted_at: submitted,
    },
  };
}
