import type { StepApi } from "./api.js";
import type { StepIO } from "./io.js";
import type { MediaLike } from "./trial.js";
import { MediaError, runTrialStep } from "./trial.js";
import { runTutorialStep } from "./tutorial.js";
import type {
  StepOutcome,
  StepWire,
  SubmitResultWire,
  TrialStepWire,
  TrialWire,
  TutorialStepWire,
} from "./types.js";

/** The steps a participant actually performs; terminal steps never get views. */
export type RunStepWire = TutorialStepWire | TrialStepWire;

export interface StepView {
  step: RunStepWire;
  outcome?: StepOutcome;
  result?: SubmitResultWire;
  /** Set when the trial's media failed and an empty answer was filed. */
  skipped?: boolean;
}

export interface SessionSummary {
  kind: "done" | "rejected" | "abandoned";
  final: StepWire;
  views: StepView[];
}

export interface RunnerIO extends StepIO {
  /** Produce a playable media handle for a trial (load / reuse a video). */
  media(trial: TrialWire): MediaLike | Promise<MediaLike>;
  /** Instrumentation hook; called after every completed step. */
  onStep?(view: StepView): void;
}

/** Mirrors the server's step sequence: ask what to do, do it, submit, ask
 * again. The server owns all experiment state; the runner never guesses.
 * Exactly one API mutation is in flight at any time, and a runner cannot
 * be started twice concurrently. */
export class SessionRunner {
  private running = false;

  constructor(
    private api: StepApi,
    private io: RunnerIO,
  ) {}

  async run(sessionId: string): Promise<SessionSummary> {
    if (this.running) throw new Error("session runner already active");
    this.running = true;
    try {
      const views: StepView[] = [];
      for (;;) {
        const step = await this.api.nextStep(sessionId);
        if (step.kind === "done" || step.kind === "rejected" || step.kind === "abandoned") {
          return { kind: step.kind, final: step, views };
        }
        const view = await this.runOne(sessionId, step);
        views.push(view);
        this.io.onStep?.(view);
      }
    } finally {
      this.running = false;
    }
  }

  private async runOne(sessionId: string, step: RunStepWire): Promise<StepView> {
    if (step.kind === "tutorial") {
      const outcome = await runTutorialStep(this.io, step);
      const result = await this.api.submitStep(sessionId, step.step_id, outcome.text);
      return { step, outcome, result };
    }
    let outcome: StepOutcome | undefined;
    let skipped = false;
    try {
      const media = await this.io.media(step.trial);
      outcome = await runTrialStep(this.io, step, media);
    } catch (err) {
      if (!(err instanceof MediaError)) throw err;
      // the only way to tell the server is an answer; an empty one is
      // recorded as an invalid sample and the session moves on
      skipped = true;
    }
    const result = await this.api.submitStep(sessionId, step.step_id, outcome?.text ?? "");
    return { step, outcome, result, skipped };
  }
}
