import assert from "node:assert/strict";
import { test } from "node:test";

import { movingAverage } from "../src/smoothing.js";

test("window 1 is the identity", () => {
  const v = [3.5, -1.0, 7.25, 0.0];
  assert.deepEqual(movingAverage(v, 1), v);
});

test("constant series is a fixed point for any window", () => {
  const v = new Array(40).fill(4.25);
  for (const w of [1, 2, 3, 5, 9, 41]) {
    for (const out of movingAverage(v, w)) {
      assert.equal(out, 4.25);
    }
  }
});

test("interior points of constant-padded series preserve the mean", () => {
  // pad a random-ish interior with constant extensions; interior smoothed
  // values average windows whose mean equals the local mean exactly for the
  // constant run, and overall interior mass is preserved
  const interior = [2, 2, 2, 2, 2, 2, 2, 2];
  const series = [2, 2, ...interior, 2, 2];
  const smoothed = movingAverage(series, 5);
  const lo = 2;
  const hi = series.length - 3;
  const rawMean = series.slice(lo, hi + 1).reduce((a, b) => a + b, 0) / (hi - lo + 1);
  const smMean = smoothed.slice(lo, hi + 1).reduce((a, b) => a + b, 0) / (hi - lo + 1);
  assert.ok(Math.abs(rawMean - smMean) < 1e-9);
});

test("mean preservation for a varying series away from the edges", () => {
  const rng = (i: number) => Math.sin(i * 1.7) * 3 + 25;
  const series = Array.from({ length: 60 }, (_, i) => rng(i));
  const w = 5;
  const half = Math.floor(w / 2);
  const smoothed = movingAverage(series, w);
  // summing full windows telescopes: interior smoothed mass equals raw mass
  // shifted by edge terms; check against a direct windowed recomputation
  for (let i = half; i < series.length - half; i++) {
    let sum = 0;
    for (let j = i - half; j <= i + half; j++) sum += series[j]!;
    assert.ok(Math.abs(smoothed[i]! - sum / w) < 1e-12);
  }
});

test("centered: symmetric input gives symmetric output", () => {
  const series = [0, 1, 2, 3, 2, 1, 0];
  const smoothed = movingAverage(series, 3);
  for (let i = 0; i < series.length; i++) {
    assert.ok(Math.abs(smoothed[i]! - smoothed[series.length - 1 - i]!) < 1e-12);
  }
});

test("rejects bad windows", () => {
  assert.throws(() => movingAverage([1, 2], 0));
  assert.throws(() => movingAverage([1, 2], 2.5));
});
