/**
 * The six figure kinds, each a pure function of the input files:
 *
 *   psnr_traces          per-user quality over time + quality-floor lines
 *   satisfaction_bars    per-user satisfaction, grouped by policy
 *   objective_timeseries slot objective over time
 *   latency_timeseries   across-user mean latency over time
 *   alpha_tradeoff       PSNR (left) and latency (right) vs alpha
 *   runtime_scaling      inference/update wall time vs user count
 *
 * Timeseries kinds apply a centered moving average (default window 5).
 */

import { readdirSync, statSync } from "node:fs";
import { join } from "node:path";

import { groupBySlot, readRecordsCsv, readSummaryJson, readSweepCsv } from "./csv.js";
import { movingAverage } from "./smoothing.js";
import { DASH_CYCLE, dualAxisChart, groupedBarChart, lineChart } from "./svg.js";

export const PLOT_KINDS = [
  "psnr_traces",
  "satisfaction_bars",
  "objective_timeseries",
  "latency_timeseries",
  "alpha_tradeoff",
  "runtime_scaling",
] as const;

export type PlotKind = (typeof PLOT_KINDS)[number];

export interface PlotSpec {
  kind: PlotKind;
  inputDir: string;
  window: number;
}

function perSlotSeries(inputDir: string): { slots: number[]; bySlot: Map<number, import("./csv.js").RecordRow[]> } {
  const rows = readRecordsCsv(join(inputDir, "records.csv"));
  const bySlot = groupBySlot(rows);
  return { slots: [...bySlot.keys()].sort((a, b) => a - b), bySlot };
}

function renderPsnrTraces(spec: PlotSpec): string {
  const { slots, bySlot } = perSlotSeries(spec.inputDir);
  const summary = readSummaryJson(join(spec.inputDir, "summary.json"));
  const users = summary.userIds;
  const series = users.map((uid, i) => {
    const y = slots.map((t) => {
      const row = bySlot.get(t)!.find((r) => r.user === uid);
      if (!row) throw new Error(`records.csv: user ${uid} missing at slot ${t}`);
      return row.qTrueDb;
    });
    return { label: `user ${uid}`, x: slots, y: movingAverage(y, spec.window), dash: DASH_CYCLE[i % DASH_CYCLE.length] };
  });
  const hlines = (summary.qMinDb ?? []).map((q, i) => ({
    y: q,
    label: `floor user ${users[i]}`,
  }));
  return lineChart(series, {
    title: `Reconstruction quality per user (${summary.policy}, window ${spec.window})`,
    xLabel: "slot",
    yLabel: "PSNR (dB)",
    hlines,
  });
}

function renderSatisfactionBars(spec: PlotSpec): string {
  // one summary.json per policy subdirectory (bench layout), or a single
  // summary.json directly in the input directory
  const summaries: import("./csv.js").RunSummary[] = [];
  const direct = join(spec.inputDir, "summary.json");
  try {
    if (statSync(direct).isFile()) summaries.push(readSummaryJson(direct));
  } catch {
    // fall through to subdirectory scan
  }
  if (summaries.length === 0) {
    for (const entry of readdirSync(spec.inputDir).sort()) {
      const candidate = join(spec.inputDir, entry, "summary.json");
      try {
        if (statSync(candidate).isFile()) summaries.push(readSummaryJson(candidate));
      } catch {
        continue;
      }
    }
  }
  if (summaries.length === 0) {
    throw new Error(`${spec.inputDir}: no summary.json found for satisfaction bars`);
  }
  const users = summaries[0]!.userIds;
  const groups = users.map((uid, i) => ({
    label: `user ${uid}`,
    values: summaries.map((s) => s.satisfactionPct[i] ?? NaN),
  }));
  groups.push({ label: "avg", values: summaries.map((s) => s.avgSatisfactionPct) });
  return groupedBarChart(groups, summaries.map((s) => s.policy), {
    title: "Constraint satisfaction by user and policy",
    xLabel: "",
    yLabel: "satisfied slots (%)",
  });
}

function renderObjectiveTimeseries(spec: PlotSpec): string {
  const { slots, bySlot } = perSlotSeries(spec.inputDir);
  const y = slots.map((t) => bySlot.get(t)![0]!.objective);
  return lineChart(
    [{ label: "slot objective", x: slots, y: movingAverage(y, spec.window) }],
    {
      title: `Quality-latency objective over time (window ${spec.window})`,
      xLabel: "slot",
      yLabel: "objective",
    },
  );
}

function renderLatencyTimeseries(spec: PlotSpec): string {
  const { slots, bySlot } = perSlotSeries(spec.inputDir);
  const y = slots.map((t) => {
    const rows = bySlot.get(t)!;
    return rows.reduce((acc, r) => acc + r.latencyMs, 0) / rows.length;
  });
  return lineChart(
    [{ label: "mean latency", x: slots, y: movingAverage(y, spec.window) }],
    {
      title: `Average transmission latency over time (window ${spec.window})`,
      xLabel: "slot",
      yLabel: "latency (ms)",
    },
  );
}

function renderAlphaTradeoff(spec: PlotSpec): string {
  const rows = readSweepCsv(join(spec.inputDir, "sweep_alpha.csv"));
  const x = rows.map((_, i) => i);
  return dualAxisChart(
    [
      { label: "PSNR", axis: "left", x, y: rows.map((r) => r.psnrDbAvg), marker: true, dash: "" },
      { label: "latency", axis: "right", x, y: rows.map((r) => r.latencyMsAvg), marker: true, dash: "8 4" },
    ],
    {
      title: "Quality-latency weight sweep",
      xLabel: "alpha",
      yLabel: "PSNR (dB)",
      y2Label: "latency (ms)",
      xTickLabels: rows.map((r) => r.value),
    },
  );
}

function renderRuntimeScaling(spec: PlotSpec): string {
  const rows = readSweepCsv(join(spec.inputDir, "sweep_n_users.csv"));
  const x = rows.map((r) => r.nUsers);
  const infer = rows.map((r) => r.inferenceMsMean);
  if (infer.some((v) => v === null)) {
    throw new Error("sweep_n_users.csv: missing inference timing columns");
  }
  const series = [
    { label: "inference per slot", x, y: infer.map((v) => v!), marker: true, dash: "" },
  ];
  const update = rows.map((r) => r.updateMsMean);
  if (update.every((v) => v !== null)) {
    series.push({ label: "model update", x, y: update.map((v) => v!), marker: true, dash: "8 4" });
  }
  return lineChart(series, {
    title: "Controller runtime vs number of users",
    xLabel: "users",
    yLabel: "wall time (ms)",
  });
}

export function render(spec: PlotSpec): string {
  switch (spec.kind) {
    case "psnr_traces":
      return renderPsnrTraces(spec);
    case "satisfaction_bars":
      return renderSatisfactionBars(spec);
    case "objective_timeseries":
      return renderObjectiveTimeseries(spec);
    case "latency_timeseries":
      return renderLatencyTimeseries(spec);
    case "alpha_tradeoff":
      return renderAlphaTradeoff(spec);
    case "runtime_scaling":
      return renderRuntimeScaling(spec);
  }
}
