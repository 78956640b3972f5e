import { describe, expect, it } from "vitest";

import type { StepApi } from "../src/api.js";
import { VirtualTimeline } from "../src/clock.js";
import type { RunnerIO, StepView } from "../src/steps.js";
import { SessionRunner } from "../src/steps.js";
import type {
  StepWire,
  SubmitResultWire,
  TrialResultWire,
  TutorialResultWire,
} from "../src/types.js";
import { FakeMedia, makeIO, makeTrialStep, makeTutorialStep, settle } from "./helpers.js";

interface Submission {
  sessionId: string;
  stepId: string;
  text: string;
}

/** Serves a fixed step script and records everything submitted. */
class ScriptedApi implements StepApi {
  submitted: Submission[] = [];

  constructor(
    private script: StepWire[],
    private results: SubmitResultWire[] = [],
  ) {}

  nextStep(sessionId: string): Promise<StepWire> {
    const step = this.script.shift();
    if (!step) throw new Error(`no step scripted for ${sessionId}`);
    return Promise.resolve(step);
  }

  submitStep(sessionId: string, stepId: string, text: string): Promise<SubmitResultWire> {
    this.submitted.push({ sessionId, stepId, text });
    const result = this.results.shift();
    if (!result) throw new Error(`no result scripted for ${stepId}`);
    return Promise.resolve(result);
  }
}

function tutorialPassed(stepId: string): TutorialResultWire {
  return {
    kind: "tutorial_result",
    step_id: stepId,
    passed: true,
    reason: "within_radius",
    distance: 12.5,
    attempts: 1,
    passes: 1,
    status: "running",
  };
}

function trialRecorded(stepId: string, valid = true): TrialResultWire {
  return { kind: "trial_result", step_id: stepId, valid, status: "running" };
}

const doneStep: StepWire = {
  kind: "done",
  status: "done",
  pay: 2.5,
  trials_answered: 2,
};

function makeRunnerIO(timeline: VirtualTimeline, failPlay = false) {
  const seen: StepView[] = [];
  const io: RunnerIO = {
    ...makeIO(timeline),
    media: () => new FakeMedia(timeline, 120, failPlay),
    onStep: (view) => seen.push(view),
  };
  return { io, seen };
}

describe("SessionRunner", () => {
  it("walks tutorial then trials to completion, submitting each answer", async () => {
    const timeline = new VirtualTimeline();
    const api = new ScriptedApi(
      [
        makeTutorialStep(),
        makeTrialStep({ step_id: "v1", trial_index: 0 }),
        makeTrialStep({ step_id: "v2", trial_index: 1 }),
        doneStep,
      ],
      [tutorialPassed("t1"), trialRecorded("v1"), trialRecorded("v2")],
    );
    const { io, seen } = makeRunnerIO(timeline);
    const runner = new SessionRunner(api, io);

    const summary = await settle(timeline, runner.run("s1"));

    expect(summary.kind).toBe("done");
    expect(summary.final).toEqual(doneStep);
    expect(summary.views).toHaveLength(3);
    expect(summary.views.map((v) => v.step.kind)).toEqual(["tutorial", "trial", "trial"]);
    expect(summary.views[0].outcome?.text).toBe("B12");
    expect(summary.views[1].result?.kind).toBe("trial_result");
    expect(api.submitted).toEqual([
      { sessionId: "s1", stepId: "t1", text: "B12" },
      { sessionId: "s1", stepId: "v1", text: "B12" },
      { sessionId: "s1", stepId: "v2", text: "B12" },
    ]);
    expect(seen).toEqual(summary.views);
  });

  it("submits an empty answer when trial media fails, and keeps going", async () => {
    const timeline = new VirtualTimeline();
    const api = new ScriptedApi(
      [makeTrialStep({ step_id: "v1" }), doneStep],
      [trialRecorded("v1", false)],
    );
    const { io } = makeRunnerIO(timeline, true);
    const runner = new SessionRunner(api, io);

    const summary = await settle(timeline, runner.run("s1"));

    expect(summary.kind).toBe("done");
    expect(summary.views[0].skipped).toBe(true);
    expect(summary.views[0].outcome).toBeUndefined();
    expect(api.submitted).toEqual([{ sessionId: "s1", stepId: "v1", text: "" }]);
  });

  it("stops when the server closes the session", async () => {
    const timeline = new VirtualTimeline();
    const rejected: StepWire = { kind: "rejected", status: "rejected" };
    const api = new ScriptedApi([makeTutorialStep(), rejected], [tutorialPassed("t1")]);
    const { io } = makeRunnerIO(timeline);
    const runner = new SessionRunner(api, io);

    const summary = await settle(timeline, runner.run("s1"));

    expect(summary.kind).toBe("rejected");
    expect(summary.views).toHaveLength(1);
  });

  it("refuses overlapping runs but can run again afterwards", async () => {
    const timeline = new VirtualTimeline();
    const api = new ScriptedApi([doneStep, doneStep]);
    const { io } = makeRunnerIO(timeline);
    const runner = new SessionRunner(api, io);

    const first = runner.run("s1");
    await expect(runner.run("s1")).rejects.toThrow("session runner already active");
    expect((await settle(timeline, first)).kind).toBe("done");

    const again = await settle(timeline, runner.run("s2"));
    expect(again.kind).toBe("done");
  });
});
