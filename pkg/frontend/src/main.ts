/** Page entry: wires the DOM to the drivers. The participant page runs a
 * session end to end; the dashboard page renders frame cards from a pasted
 * campaign definition. */

import { GazeApi } from "./api.js";
import { checkViewport, maximizeAdvisory } from "./gate.js";
import { loadFrameCards } from "./dashboard.js";
import type { RunnerIO } from "./steps.js";
import { SessionRunner } from "./steps.js";
import {
  CanvasSurface,
  DomInput,
  PerformanceClock,
  RafScheduler,
  loadVideo,
} from "./dom.js";
import { MediaError } from "./trial.js";
import type { CampaignWire, TrialWire, VideoWire } from "./types.js";

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing element #${id}`);
  return found as T;
}

function showError(message: string): void {
  const box = el<HTMLElement>("error");
  box.textContent = message;
  box.hidden = false;
}

async function runParticipant(api: GazeApi, campaignId: string): Promise<void> {
  const gate = checkViewport(window.innerWidth, window.innerHeight);
  if (!gate.admitted) {
    showError(gate.reason ?? "window too small");
    return;
  }
  const advisory = maximizeAdvisory(
    { width: window.innerWidth, height: window.innerHeight },
    { width: screen.width, height: screen.height },
  );
  if (advisory) {
    const note = el<HTMLElement>("advisory");
    note.textContent = advisory;
    note.hidden = false;
  }

  const participant = await api.admitParticipant(screen.width, screen.height);
  const session = await api.openSession(campaignId, participant.participant_id);

  const canvas = el<HTMLCanvasElement>("stage");
  const form = el<HTMLFormElement>("answer");
  const input = el<HTMLInputElement>("answer-text");
  const video = el<HTMLVideoElement>("clip");
  // the API hands participants video ids, not URIs; the deployment embeds
  // the id -> uri map in the page (see index.html)
  const videosById = new Map<string, VideoWire>();
  const declared = (globalThis as { GAZECHART_VIDEOS?: VideoWire[] }).GAZECHART_VIDEOS;
  for (const v of declared ?? []) videosById.set(v.video_id, v);

  const io: RunnerIO = {
    clock: new PerformanceClock(),
    scheduler: new RafScheduler(),
    surface: new CanvasSurface(canvas),
    input: new DomInput(input, form),
    rect: { x: 0, y: 0, width: canvas.width, height: canvas.height },
    collectResponse: () =>
      new Promise<string>((resolve) => {
        form.addEventListener(
          "submit",
          (ev) => {
            ev.preventDefault();
            resolve(input.value);
          },
          { once: true },
        );
      }),
    media: (trial: TrialWire) => {
      const meta = videosById.get(trial.video_id);
      if (!meta?.uri) throw new MediaError(`no uri for video ${trial.video_id}`);
      return loadVideo(video, meta.uri);
    },
    onStep: (view) => {
      el<HTMLElement>("progress").textContent =
        view.step.kind === "tutorial"
          ? `screening attempt ${view.step.attempts + 1}`
          : `clip ${view.step.trial_index + 1} of ${view.step.trial_count}`;
    },
  };

  const summary = await new SessionRunner(api, io).run(session.session_id);
  const finale = el<HTMLElement>("finale");
  finale.hidden = false;
  finale.textContent =
    summary.kind === "done"
      ? `All done, thank you. ${summary.views.length} steps completed.`
      : `Session ended: ${summary.kind}.`;
}

async function runDashboard(api: GazeApi): Promise<void> {
  const form = el<HTMLFormElement>("campaign-form");
  const text = el<HTMLTextAreaElement>("campaign-json");
  const list = el<HTMLElement>("frames");
  form.addEventListener("submit", (ev) => {
    ev.preventDefault();
    void (async () => {
      try {
        // paste either a definition to create, or a created campaign
        // (it carries campaign_id) to review
        const parsed = JSON.parse(text.value) as { campaign_id?: string };
        const campaign =
          typeof parsed.campaign_id === "string"
            ? (parsed as CampaignWire)
            : await api.createCampaign(parsed);
        const cards = await loadFrameCards(api, campaign, 4);
        list.textContent = "";
        for (const card of cards) {
          const item = document.createElement("div");
          item.className = "frame-card";
          const title = document.createElement("h3");
          title.textContent = `${card.videoId} @ ${card.frameTimeMs} ms`;
          item.appendChild(title);
          const badge = document.createElement("p");
          badge.textContent = card.error
            ? `error: ${card.error}`
            : `${card.valid} valid of ${card.total} samples, ` +
              `${(card.invalidRate * 100).toFixed(1)}% invalid`;
          item.appendChild(badge);
          if (card.heatmapUrl) {
            const img = document.createElement("img");
            img.src = card.heatmapUrl;
            img.alt = "gaze heatmap";
            item.appendChild(img);
          } else {
            const empty = document.createElement("p");
            empty.textContent = "no valid samples yet";
            item.appendChild(empty);
          }
          list.appendChild(item);
        }
      } catch (err) {
        showError(String(err));
      }
    })();
  });
}

export function boot(): void {
  const params = new URLSearchParams(location.search);
  const api = new GazeApi(params.get("api") ?? "");
  const campaign = params.get("campaign");
  const task =
    params.get("dashboard") !== null
      ? runDashboard(api)
      : campaign !== null && campaign !== ""
        ? runParticipant(api, campaign)
        : Promise.reject(new Error("this link is missing its campaign id (?campaign=...)"));
  task.catch((err) => showError(String(err)));
}

if (typeof document !== "undefined" && document.getElementById("stage")) {
  boot();
}
