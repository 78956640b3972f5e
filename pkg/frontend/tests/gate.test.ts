import { describe, expect, it } from "vitest";

import { checkViewport, maximizeAdvisory, MIN_HEIGHT, MIN_WIDTH } from "../src/gate.js";

describe("checkViewport", () => {
  it("refuses a viewport one pixel short in width", () => {
    const result = checkViewport(1023, 768);
    expect(result.admitted).toBe(false);
    expect(result.reason).toContain("1024x768");
    expect(result.reason).toContain("1023x768");
  });

  it("refuses a viewport short in height only", () => {
    expect(checkViewport(1024, 767).admitted).toBe(false);
  });

  it("admits the exact minimum and anything larger", () => {
    expect(checkViewport(MIN_WIDTH, MIN_HEIGHT)).toEqual({ admitted: true });
    expect(checkViewport(1920, 1080)).toEqual({ admitted: true });
  });
});

describe("maximizeAdvisory", () => {
  const screen = { width: 1920, height: 1080 };

  it("asks for a maximized window when the window is smaller", () => {
    expect(maximizeAdvisory({ width: 1600, height: 1080 }, screen)).toMatch(/maximize/i);
    expect(maximizeAdvisory({ width: 1920, height: 900 }, screen)).toMatch(/maximize/i);
  });

  it("stays quiet when the window fills the screen", () => {
    expect(maximizeAdvisory({ width: 1920, height: 1080 }, screen)).toBeNull();
  });
});
