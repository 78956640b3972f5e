import type { FrameApi } from "./api.js";
import { ApiError } from "./api.js";
import type { CampaignWire } from "./types.js";

/** One frame of interest as the researcher sees it: how much data came in,
 * how much of it parsed, and where the heatmap lives (when there is one). */
export interface FrameCard {
  frameIndex: number;
  videoId: string;
  frameTimeMs: number;
  total: number;
  valid: number;
  successRate: number;
  invalidRate: number;
  /** null until the frame has at least one valid sample; no request is made. */
  heatmapUrl: string | null;
  error?: string;
}

/** RFC 4180 field splitting; reported_text can contain commas and quotes. */
export function parseCsv(text: string): string[][] {
  const rows: string[][] = [];
  let row: string[] = [];
  let field = "";
  let quoted = false;
  for (let i = 0; i < text.length; i++) {
    const c = text[i];
    if (quoted) {
      if (c === '"') {
        if (text[i + 1] === '"') {
          field += '"';
          i++;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c === '"') {
      quoted = true;
    } else if (c === ",") {
      row.push(field);
      field = "";
    } else if (c === "\n") {
      row.push(field);
      rows.push(row);
      row = [];
      field = "";
    } else if (c !== "\r") {
      field += c;
    }
  }
  if (field.length > 0 || row.length > 0) {
    row.push(field);
    rows.push(row);
  }
  return rows;
}

function cardFromCsv(card: FrameCard, csv: string): void {
  const rows = parseCsv(csv);
  if (rows.length === 0) return;
  const header = rows[0];
  const validCol = header.indexOf("valid");
  const body = rows.slice(1);
  card.total = body.length;
  card.valid = body.filter((r) => r[validCol] === "true").length;
  card.successRate = card.total > 0 ? card.valid / card.total : 0;
  card.invalidRate = card.total > 0 ? 1 - card.successRate : 0;
}

/** Build the dashboard's frame cards for a campaign. Each frame is fetched
 * independently; an API failure marks that card and leaves the rest alone. */
export async function loadFrameCards(
  api: FrameApi,
  campaign: CampaignWire,
  downsample = 1,
): Promise<FrameCard[]> {
  const cards: FrameCard[] = [];
  for (let i = 0; i < campaign.frames_of_interest.length; i++) {
    const foi = campaign.frames_of_interest[i];
    const card: FrameCard = {
      frameIndex: i,
      videoId: foi.video_id,
      frameTimeMs: foi.frame_time_ms,
      total: 0,
      valid: 0,
      successRate: 0,
      invalidRate: 0,
      heatmapUrl: null,
    };
    try {
      cardFromCsv(card, await api.samplesCsv(campaign.campaign_id, i));
      if (card.valid > 0) {
        card.heatmapUrl = api.heatmapUrl(campaign.campaign_id, i, downsample);
      }
    } catch (err) {
      card.error = err instanceof ApiError ? err.detail : String(err);
    }
    cards.push(card);
  }
  return cards;
}
