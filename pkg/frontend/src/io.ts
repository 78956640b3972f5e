import type { Clock, FrameScheduler } from "./clock.js";
import type { Rect, StageSurface } from "./chart.js";

/** The response text box. Adapters wrap a real <input>; tests use a plain
 * object. The driver owns when it appears and guarantees it appears empty. */
export interface InputLike {
  value: string;
  show(): void;
  hide(): void;
}

/** Everything a step driver touches. collectResponse resolves with the raw
 * typed text once the participant submits the form. */
export interface StepIO {
  clock: Clock;
  scheduler: FrameScheduler;
  surface: StageSurface;
  input: InputLike;
  /** Where the stimulus sits on screen; the chart covers exactly this. */
  rect: Rect;
  collectResponse(): Promise<string>;
}
