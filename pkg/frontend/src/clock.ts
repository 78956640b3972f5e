/** Time sources the step drivers depend on, kept injectable so tests can
 * run thousands of frames in microseconds and measure timing exactly. */

export interface Clock {
  /** Monotonic milliseconds; origin is arbitrary. */
  now(): number;
}

export interface FrameScheduler {
  request(cb: (now: number) => void): number;
  cancel(id: number): void;
}

/** Runs cb every frame until it returns true; resolves with the time of the
 * frame that ended the loop. The loop is frame-driven, not timer-driven, so
 * a recorded timestamp always corresponds to a frame that actually ran. */
export function frameLoop(
  scheduler: FrameScheduler,
  clock: Clock,
  cb: (now: number) => boolean,
): Promise<number> {
  return new Promise((resolve) => {
    const tick = () => {
      const now = clock.now();
      if (cb(now)) {
        resolve(now);
        return;
      }
      scheduler.request(tick);
    };
    scheduler.request(tick);
  });
}

/** Deterministic virtual frame clock for instrumented runs. Frames advance
 * by frameMs plus whatever jitter() returns, and scheduled callbacks fire
 * with microtasks flushed between frames so awaiting code keeps up. */
export class VirtualTimeline implements Clock, FrameScheduler {
  private t = 0;
  private nextId = 1;
  private queue = new Map<number, (now: number) => void>();

  constructor(
    private frameMs: number = 1000 / 60,
    private jitter: () => number = () => 0,
  ) {}

  now(): number {
    return this.t;
  }

  request(cb: (now: number) => void): number {
    const id = this.nextId++;
    this.queue.set(id, cb);
    return id;
  }

  cancel(id: number): void {
    this.queue.delete(id);
  }

  get pending(): number {
    return this.queue.size;
  }

  async step(): Promise<void> {
    this.t += this.frameMs + this.jitter();
    const due = [...this.queue.values()];
    this.queue.clear();
    for (const cb of due) cb(this.t);
    // let promise continuations run and schedule their next frame
    for (let i = 0; i < 8; i++) await Promise.resolve();
  }

  /** Fire frames until nothing is scheduled any more. */
  async drain(maxFrames = 100_000): Promise<void> {
    let frames = 0;
    while (this.queue.size > 0) {
      if (++frames > maxFrames) {
        throw new Error(`drain exceeded ${maxFrames} frames; loop stuck?`);
      }
      await this.step();
    }
  }
}

/** Small deterministic jitter source (LCG) for simulating uneven frames. */
export function jitterSource(seed: number, amplitudeMs: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state * 1664525 + 1013904223) >>> 0;
    return (state / 2 ** 32) * amplitudeMs;
  };
}
