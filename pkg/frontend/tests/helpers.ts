import type { Clock } from "../src/clock.js";
import { VirtualTimeline } from "../src/clock.js";
import type { Rect } from "../src/chart.js";
import type { InputLike, StepIO } from "../src/io.js";
import type { MediaLike } from "../src/trial.js";
import type {
  ChartWire,
  PathSample,
  TrialStepWire,
  TutorialStepWire,
} from "../src/types.js";

export function makeChart(overrides: Partial<ChartWire> = {}): ChartWire {
  return {
    params: {
      frame_width: 1024,
      frame_height: 576,
      font_size: 20,
      density: 0.5,
      jitter_fraction: 0.25,
      seed: 1,
    },
    d_v: 40,
    d_h: 80,
    placements: [
      { label: "B12", x: 40, y: 20 },
      { label: "K37", x: 120, y: 20 },
      { label: "Q05", x: 40, y: 60 },
      { label: "Z99", x: 984, y: 556 },
    ],
    ...overrides,
  };
}

/** Straight-line path at constant speed, samples every 1/60 s. */
export function makePath(durationS: number, rate = 60): PathSample[] {
  const n = Math.round(durationS * rate);
  const path: PathSample[] = [];
  for (let i = 0; i <= n; i++) {
    const t = i / rate;
    path.push([t, 100 + 150 * t, 200 + 40 * t]);
  }
  return path;
}

export function makeTutorialStep(
  overrides: Partial<TutorialStepWire> = {},
): TutorialStepWire {
  const duration = 3.0;
  const path = makePath(duration);
  const last = path[path.length - 1];
  return {
    kind: "tutorial",
    status: "screening",
    step_id: "t1",
    chart_seconds: 1.0,
    attempts: 0,
    passes: 0,
    tutorial: {
      duration,
      letter: "X",
      color: "magenta",
      path,
      final_position: [last[1], last[2]],
      chart: makeChart(),
      seed: 7,
    },
    ...overrides,
  };
}

export function makeTrialStep(overrides: Partial<TrialStepWire> = {}): TrialStepWire {
  return {
    kind: "trial",
    status: "running",
    step_id: "v1",
    trial_index: 0,
    trial_count: 6,
    trial: {
      video_id: "vid1",
      frame_time_ms: 30_000,
      clip_start_ms: 20_000,
      chart: makeChart(),
      chart_seconds: 1.0,
    },
    ...overrides,
  };
}

export interface DrawCall {
  kind: "clear" | "text";
  at: number;
  text?: string;
  x?: number;
  y?: number;
  fontPx?: number;
  color?: string;
}

/** Records every draw with the clock time it happened at. */
export class FakeSurface {
  calls: DrawCall[] = [];

  constructor(private clock: Clock) {}

  clear(color: string): void {
    this.calls.push({ kind: "clear", at: this.clock.now(), color });
  }

  drawText(text: string, x: number, y: number, fontPx: number, color: string): void {
    this.calls.push({ kind: "text", at: this.clock.now(), text, x, y, fontPx, color });
  }

  texts(): DrawCall[] {
    return this.calls.filter((c) => c.kind === "text");
  }
}

export class FakeInput implements InputLike {
  shown = false;
  events: string[] = [];

  constructor(public value = "") {}

  show(): void {
    this.shown = true;
    this.events.push(`show:${this.value}`);
  }

  hide(): void {
    this.shown = false;
    this.events.push("hide");
  }
}

/** Media whose clock is the virtual timeline: while playing, currentTime
 * advances by exactly the simulated frame interval. */
export class FakeMedia implements MediaLike {
  currentTime = 0;
  playing = false;
  playCalls = 0;
  pauseCalls = 0;
  private lastNow = 0;

  constructor(
    private timeline: VirtualTimeline,
    public duration = 120,
    private failPlay = false,
  ) {}

  play(): Promise<void> {
    this.playCalls++;
    if (this.failPlay) return Promise.reject(new Error("decode failure"));
    this.playing = true;
    this.lastNow = this.timeline.now();
    const pump = (now: number) => {
      if (!this.playing) return;
      this.currentTime += (now - this.lastNow) / 1000;
      this.lastNow = now;
      this.timeline.request(pump);
    };
    this.timeline.request(pump);
    return Promise.resolve();
  }

  pause(): void {
    this.pauseCalls++;
    this.playing = false;
  }
}

export interface TestIO extends StepIO {
  surface: FakeSurface;
  input: FakeInput;
}

/** IO bundle on a virtual timeline. The scripted participant answers with
 * `answer` one frame after the input appears. */
export function makeIO(
  timeline: VirtualTimeline,
  answer = "B12",
  rect: Rect = { x: 0, y: 0, width: 1024, height: 576 },
): TestIO {
  return {
    clock: timeline,
    scheduler: timeline,
    surface: new FakeSurface(timeline),
    input: new FakeInput("leftover text"),
    rect,
    collectResponse: () =>
      new Promise<string>((resolve) => {
        timeline.request(() => resolve(answer));
      }),
  };
}

/** Run a driver to completion on the virtual timeline. Alternates microtask
 * flushes with frame drains, so drivers that start with awaits (API calls)
 * get to their first frame request before we decide the queue is empty. */
export async function settle<T>(timeline: VirtualTimeline, work: Promise<T>): Promise<T> {
  let settled = false;
  work.then(
    () => (settled = true),
    () => (settled = true),
  );
  for (let spins = 0; !settled; spins++) {
    if (spins > 10_000) throw new Error("work did not settle; driver stuck?");
    for (let i = 0; i < 8; i++) await Promise.resolve();
    await timeline.drain();
  }
  return work;
}
