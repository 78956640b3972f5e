import { describe, expect, it } from "vitest";

import { ApiError, type FrameApi } from "../src/api.js";
import { loadFrameCards, parseCsv } from "../src/dashboard.js";
import type { CampaignWire } from "../src/types.js";

const HEADER =
  "campaign_id,video_id,frame_time_ms,participant_id,session_id," +
  "reported_text,x,y,valid,submitted_at";

function sampleRow(text: string, valid: boolean): string {
  const loc = valid ? "120.0,20.0" : ",";
  return `c1,vid1,30000,p1,s1,${text},${loc},${valid},2026-08-01T12:00:00+00:00`;
}

describe("parseCsv", () => {
  it("splits plain rows", () => {
    expect(parseCsv("a,b,c\n1,2,3\n")).toEqual([
      ["a", "b", "c"],
      ["1", "2", "3"],
    ]);
  });

  it("keeps commas inside quoted fields", () => {
    expect(parseCsv('x,"a,b",z\n')).toEqual([["x", "a,b", "z"]]);
  });

  it("unescapes doubled quotes", () => {
    expect(parseCsv('"say ""hi""",2\n')).toEqual([['say "hi"', "2"]]);
  });

  it("accepts CRLF line endings and a missing final newline", () => {
    expect(parseCsv("a,b\r\n1,2")).toEqual([
      ["a", "b"],
      ["1", "2"],
    ]);
  });

  it("returns nothing for an empty export", () => {
    expect(parseCsv("")).toEqual([]);
  });
});

function makeCampaign(frames: number): CampaignWire {
  return {
    campaign_id: "c1",
    videos: [
      { video_id: "vid1", duration_s: 60, frame_width: 1024, frame_height: 576 },
    ],
    frames_of_interest: Array.from({ length: frames }, (_, i) => ({
      video_id: "vid1",
      frame_time_ms: 10_000 * (i + 1),
    })),
    params: {
      clip_seconds: 10,
      tutorial_seconds: 3,
      chart_seconds: 1,
      approval_radius: 100,
    },
    pay_per_session: 2.5,
    batch_size: 50,
  };
}

class FakeFrameApi implements FrameApi {
  heatmapRequests: number[] = [];

  constructor(private csvByFrame: Record<number, string | Error>) {}

  samplesCsv(campaignId: string, frameIndex: number): Promise<string> {
    const entry = this.csvByFrame[frameIndex];
    if (entry instanceof Error) return Promise.reject(entry);
    return Promise.resolve(entry ?? `${HEADER}\n`);
  }

  heatmapUrl(campaignId: string, frameIndex: number, downsample = 1): string {
    this.heatmapRequests.push(frameIndex);
    return `http://api.test/campaigns/${campaignId}/frames/${frameIndex}/heatmap.pgm?downsample=${downsample}`;
  }
}

describe("loadFrameCards", () => {
  it("summarizes each frame and isolates failures", async () => {
    const csv0 = [
      HEADER,
      sampleRow("B12", true),
      sampleRow('"A,B"', true), // quoted comma must not shift the valid column
      sampleRow("QQ", false),
      sampleRow("K37", true),
    ].join("\n");
    const api = new FakeFrameApi({
      0: `${csv0}\n`,
      1: `${HEADER}\n`, // header only: no submissions yet
      2: new ApiError(409, "campaign still open"),
    });
    const cards = await loadFrameCards(api, makeCampaign(3), 2);

    expect(cards).toHaveLength(3);
    expect(cards[0].total).toBe(4);
    expect(cards[0].valid).toBe(3);
    expect(cards[0].successRate).toBeCloseTo(0.75, 12);
    expect(cards[0].invalidRate).toBeCloseTo(0.25, 12);
    expect(cards[0].heatmapUrl).toContain("/frames/0/heatmap.pgm?downsample=2");
    expect(cards[0].error).toBeUndefined();

    expect(cards[1].total).toBe(0);
    expect(cards[1].successRate).toBe(0);
    expect(cards[1].heatmapUrl).toBeNull();

    expect(cards[2].error).toBe("campaign still open");
    expect(cards[2].heatmapUrl).toBeNull();

    // frames without valid samples never get a heatmap URL built for them
    expect(api.heatmapRequests).toEqual([0]);
  });

  it("reports non-API failures as text", async () => {
    const api = new FakeFrameApi({ 0: new Error("network down") });
    const cards = await loadFrameCards(api, makeCampaign(1));
    expect(cards[0].error).toContain("network down");
  });
});
