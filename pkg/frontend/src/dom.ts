/** Real-browser bindings for the injectable pieces the drivers use.
 * Everything here is a thin adapter; no experiment logic lives in this
 * file, so the logic stays testable without a DOM. */

import type { Clock, FrameScheduler } from "./clock.js";
import type { StageSurface } from "./chart.js";
import type { InputLike } from "./io.js";
import type { MediaLike } from "./trial.js";
import { MediaError } from "./trial.js";

export class PerformanceClock implements Clock {
  now(): number {
    return performance.now();
  }
}

export class RafScheduler implements FrameScheduler {
  request(cb: (now: number) => void): number {
    return requestAnimationFrame(() => cb(performance.now()));
  }

  cancel(id: number): void {
    cancelAnimationFrame(id);
  }
}

/** Draws on a 2D canvas. Glyph advance in the layout contract is 0.6em,
 * which standard monospace faces match, so triplets fill their boxes. */
export class CanvasSurface implements StageSurface {
  private ctx: CanvasRenderingContext2D;

  constructor(private canvas: HTMLCanvasElement) {
    const ctx = canvas.getContext("2d");
    if (!ctx) throw new Error("2d canvas context unavailable");
    this.ctx = ctx;
  }

  clear(color: string): void {
    this.ctx.fillStyle = color;
    this.ctx.fillRect(0, 0, this.canvas.width, this.canvas.height);
  }

  drawText(text: string, x: number, y: number, fontPx: number, color: string): void {
    this.ctx.font = `${fontPx}px "Courier New", monospace`;
    this.ctx.textAlign = "center";
    this.ctx.textBaseline = "middle";
    this.ctx.fillStyle = color;
    this.ctx.fillText(text, x, y);
  }
}

export class DomInput implements InputLike {
  constructor(
    private el: HTMLInputElement,
    private container: HTMLElement,
  ) {}

  get value(): string {
    return this.el.value;
  }

  set value(v: string) {
    this.el.value = v;
  }

  show(): void {
    this.container.hidden = false;
    this.el.focus();
  }

  hide(): void {
    this.container.hidden = true;
  }
}

export class VideoMedia implements MediaLike {
  constructor(private el: HTMLVideoElement) {}

  get duration(): number {
    return this.el.duration;
  }

  get currentTime(): number {
    return this.el.currentTime;
  }

  set currentTime(v: number) {
    this.el.currentTime = v;
  }

  play(): Promise<void> {
    return this.el.play();
  }

  pause(): void {
    this.el.pause();
  }
}

/** Point the element at a URI and wait until it can play through.
 * Resolution failures surface as MediaError so the runner files the trial
 * as skipped instead of crashing the session. */
export function loadVideo(el: HTMLVideoElement, uri: string): Promise<MediaLike> {
  return new Promise((resolve, reject) => {
    const ok = () => {
      cleanup();
      resolve(new VideoMedia(el));
    };
    const bad = () => {
      cleanup();
      reject(new MediaError(`cannot load video ${uri}`));
    };
    const cleanup = () => {
      el.removeEventListener("canplaythrough", ok);
      el.removeEventListener("error", bad);
    };
    el.addEventListener("canplaythrough", ok);
    el.addEventListener("error", bad);
    el.src = uri;
    el.load();
  });
}
