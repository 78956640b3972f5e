import type { ChartWire } from "./types.js";

/** Chart glyphs are 40% gray on a black field, hard to read unless foveated,
 * which is the point: peripheral vision cannot grab a label. */
export const CHART_BACKGROUND = "#000000";
export const GLYPH_COLOR = "#666666";

/** What the drivers draw on. The DOM adapter maps this onto a 2D canvas
 * context with textAlign=center and textBaseline=middle; tests record calls. */
export interface StageSurface {
  /** Fill the whole stage with a color. */
  clear(color: string): void;
  /** Draw text centered on (x, y) at the given font size in px. */
  drawText(text: string, x: number, y: number, fontPx: number, color: string): void;
}

export interface Rect {
  x: number;
  y: number;
  width: number;
  height: number;
}

export interface GlyphOp {
  label: string;
  x: number;
  y: number;
  fontPx: number;
}

/** Map chart anchors into a display rectangle. The chart is laid out in
 * frame coordinates; the display rect is wherever the video sat on screen,
 * and the chart must cover exactly that rectangle. */
export function layoutChart(chart: ChartWire, rect: Rect): GlyphOp[] {
  const sx = rect.width / chart.params.frame_width;
  const sy = rect.height / chart.params.frame_height;
  return chart.placements.map((p) => ({
    label: p.label,
    x: rect.x + p.x * sx,
    y: rect.y + p.y * sy,
    fontPx: chart.params.font_size * sy,
  }));
}

export function renderChart(surface: StageSurface, chart: ChartWire, rect: Rect): void {
  surface.clear(CHART_BACKGROUND);
  for (const op of layoutChart(chart, rect)) {
    surface.drawText(op.label, op.x, op.y, op.fontPx, GLYPH_COLOR);
  }
}
