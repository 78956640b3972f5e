export const MIN_WIDTH = 1024;
export const MIN_HEIGHT = 768;

export interface GateResult {
  admitted: boolean;
  reason?: string;
}

/** Client-side resolution gate; the server re-checks on admission. Both
 * dimensions must meet the minimum, so 1023x768 is refused. */
export function checkViewport(width: number, height: number): GateResult {
  if (width >= MIN_WIDTH && height >= MIN_HEIGHT) return { admitted: true };
  return {
    admitted: false,
    reason:
      `This experiment needs a window of at least ${MIN_WIDTH}x${MIN_HEIGHT}; ` +
      `yours is ${width}x${height}.`,
  };
}

/** The maximized window is requested, not enforced: show an advisory when
 * the window is smaller than the screen and record what the participant had. */
export function maximizeAdvisory(
  windowSize: { width: number; height: number },
  screenSize: { width: number; height: number },
): string | null {
  if (windowSize.width < screenSize.width || windowSize.height < screenSize.height) {
    return "Please maximize your browser window before starting.";
  }
  return null;
}
