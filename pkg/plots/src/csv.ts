/**
 * Schema-checked readers for the simulator's versioned outputs.
 *
 * records.csv: one row per (slot, user); sweep CSVs: one row per swept value;
 * summary.json: run summary plus a full config echo. Every file carries a
 * schema_version the readers verify before trusting columns.
 */

import { readFileSync } from "node:fs";

export const SCHEMA_VERSION = 1;

export interface RecordRow {
  t: number;
  user: number;
  snrDb: number;
  cr: number;
  rateBps: number;
  latencyMs: number;
  qTrueDb: number;
  qOracleDb: number;
  satisfied: boolean;
  objective: number;
}

export interface SweepRow {
  param: string;
  value: string;
  nUsers: number;
  slots: number;
  satisfactionPctAvg: number;
  psnrDbAvg: number;
  latencyMsAvg: number;
  objective: number;
  inferenceMsMean: number | null;
  inferenceMsStd: number | null;
  updateMsMean: number | null;
  updateMsStd: number | null;
}

export interface RunSummary {
  policy: string;
  nSlots: number;
  userIds: number[];
  satisfactionPct: number[];
  meanPsnrDb: number[];
  meanLatencyMs: number[];
  avgSatisfactionPct: number;
  avgPsnrDb: number;
  avgLatencyMs: number;
  totalObjective: number;
  qMinDb: number[] | null;
}

const RECORDS_HEADER =
  "t,user,snr_db,cr,rate_bps,latency_ms,q_true_db,q_oracle_db,satisfied,objective";

const SWEEP_HEADER =
  "param,value,n_users,slots,satisfaction_pct_avg,psnr_db_avg,latency_ms_avg," +
  "objective,inference_ms_mean,inference_ms_std,update_ms_mean,update_ms_std";

function readVersionedLines(path: string, expectedHeader: string): string[] {
  const text = readFileSync(path, "utf8");
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  const first = lines[0];
  if (first === undefined || !first.startsWith("# schema_version=")) {
    throw new Error(`${path}: missing schema_version header`);
  }
  const version = Number(first.split("=", 2)[1]);
  if (version !== SCHEMA_VERSION) {
    throw new Error(`${path}: unsupported schema version ${version}`);
  }
  if (lines[1] !== expectedHeader) {
    throw new Error(`${path}: unexpected column header`);
  }
  if (lines.length <= 2) {
    throw new Error(`${path}: no data rows`);
  }
  return lines.slice(2);
}

function num(path: string, field: string, raw: string | undefined): number {
  const v = Number(raw);
  if (raw === undefined || raw === "" || Number.isNaN(v)) {
    throw new Error(`${path}: bad ${field} value ${JSON.stringify(raw)}`);
  }
  return v;
}

function numOrNull(raw: string | undefined): number | null {
  if (raw === undefined || raw === "") return null;
  const v = Number(raw);
  return Number.isNaN(v) ? null : v;
}

export function readRecordsCsv(path: string): RecordRow[] {
  return readVersionedLines(path, RECORDS_HEADER).map((line) => {
    const p = line.split(",");
    if (p.length !== 10) throw new Error(`${path}: malformed row: ${line}`);
    return {
      t: num(path, "t", p[0]),
      user: num(path, "user", p[1]),
      snrDb: num(path, "snr_db", p[2]),
      cr: num(path, "cr", p[3]),
      rateBps: num(path, "rate_bps", p[4]),
      latencyMs: num(path, "latency_ms", p[5]),
      qTrueDb: num(path, "q_true_db", p[6]),
      qOracleDb: num(path, "q_oracle_db", p[7]),
      satisfied: p[8] === "1",
      objective: num(path, "objective", p[9]),
    };
  });
}

export function readSweepCsv(path: string): SweepRow[] {
  return readVersionedLines(path, SWEEP_HEADER).map((line) => {
    const p = line.split(",");
    if (p.length !== 12) throw new Error(`${path}: malformed row: ${line}`);
    return {
      param: p[0] ?? "",
      value: p[1] ?? "",
      nUsers: num(path, "n_users", p[2]),
      slots: num(path, "slots", p[3]),
      satisfactionPctAvg: num(path, "satisfaction_pct_avg", p[4]),
      psnrDbAvg: num(path, "psnr_db_avg", p[5]),
      latencyMsAvg: num(path, "latency_ms_avg", p[6]),
      objective: num(path, "objective", p[7]),
      inferenceMsMean: numOrNull(p[8]),
      inferenceMsStd: numOrNull(p[9]),
      updateMsMean: numOrNull(p[10]),
      updateMsStd: numOrNull(p[11]),
    };
  });
}

export function readSummaryJson(path: string): RunSummary {
  const payload = JSON.parse(readFileSync(path, "utf8"));
  if (payload.schema_version !== SCHEMA_VERSION) {
    throw new Error(`${path}: unsupported schema version ${payload.schema_version}`);
  }
  const s = payload.summary;
  if (!s) throw new Error(`${path}: missing summary block`);
  const users = payload.config?.users;
  return {
    policy: s.policy,
    nSlots: s.n_slots,
    userIds: s.user_ids,
    satisfactionPct: s.satisfaction_pct,
    meanPsnrDb: s.mean_psnr_db,
    meanLatencyMs: s.mean_latency_ms,
    avgSatisfactionPct: s.avg_satisfaction_pct,
    avgPsnrDb: s.avg_psnr_db,
    avgLatencyMs: s.avg_latency_ms,
    totalObjective: s.total_objective,
    qMinDb: Array.isArray(users) ? users.map((u: { q_min: number }) => u.q_min) : null,
  };
}

/** Group record rows by slot, preserving slot order. */
export function groupBySlot(rows: RecordRow[]): Map<number, RecordRow[]> {
  const slots = new Map<number, RecordRow[]>();
  for (const row of rows) {
    const bucket = slots.get(row.t);
    if (bucket) bucket.push(row);
    else slots.set(row.t, [row]);
  }
  return slots;
}
