/**
 * Centered moving average over a fixed slot window (default 5, matching the
 * timeseries figures). Edges shrink the window to the available points, so
 * a constant series is a fixed point and interior means are preserved.
 */

export function movingAverage(values: number[], window: number): number[] {
  if (!Number.isInteger(window) || window < 1) {
    throw new Error(`smoothing window must be a positive integer, got ${window}`);
  }
  if (window === 1) return values.slice();
  const half = Math.floor(window / 2);
  const out = new Array<number>(values.length);
  for (let i = 0; i < values.length; i++) {
    const lo = Math.max(0, i - half);
    const hi = Math.min(values.length - 1, i + half);
    let sum = 0;
    for (let j = lo; j <= hi; j++) sum += values[j]!;
    out[i] = sum / (hi - lo + 1);
  }
  return out;
}
