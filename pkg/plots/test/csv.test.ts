import assert from "node:assert/strict";
import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { test } from "node:test";

import { groupBySlot, readRecordsCsv, readSummaryJson, readSweepCsv } from "../src/csv.js";

const FIXTURES = join(process.cwd(), "test", "fixtures");

test("reads the golden 900-slot records file", () => {
  const rows = readRecordsCsv(join(FIXTURES, "run", "records.csv"));
  assert.equal(rows.length, 900 * 4);
  const slots = groupBySlot(rows);
  assert.equal(slots.size, 900);
  for (const row of rows.slice(0, 40)) {
    assert.ok(row.latencyMs > 0);
    assert.ok(row.cr >= 1 / 30 - 1e-12 && row.cr <= 0.3 + 1e-12);
  }
});

test("reads summary.json with config echo", () => {
  const s = readSummaryJson(join(FIXTURES, "run", "summary.json"));
  assert.equal(s.policy, "proposed");
  assert.equal(s.userIds.length, 4);
  assert.deepEqual(s.qMinDb, [33, 33, 26, 26]);
  assert.ok(s.avgSatisfactionPct > 90);
});

test("reads sweep CSVs", () => {
  const alpha = readSweepCsv(join(FIXTURES, "sweeps", "sweep_alpha.csv"));
  assert.equal(alpha.length, 3);
  assert.ok(alpha.every((r) => r.param === "alpha"));
  const users = readSweepCsv(join(FIXTURES, "sweeps", "sweep_n_users.csv"));
  assert.deepEqual(users.map((r) => r.nUsers), [2, 4, 6]);
  assert.ok(users.every((r) => r.inferenceMsMean !== null));
});

test("rejects missing schema header", () => {
  const dir = mkdtempSync(join(tmpdir(), "plots-"));
  const bad = join(dir, "records.csv");
  writeFileSync(bad, "t,user\n0,1\n");
  assert.throws(() => readRecordsCsv(bad), /schema_version/);
});

test("rejects wrong schema version", () => {
  const dir = mkdtempSync(join(tmpdir(), "plots-"));
  const bad = join(dir, "records.csv");
  writeFileSync(bad, "# schema_version=9\nt,user\n0,1\n");
  assert.throws(() => readRecordsCsv(bad), /unsupported schema version/);
});

test("rejects empty data", () => {
  const dir = mkdtempSync(join(tmpdir(), "plots-"));
  const bad = join(dir, "records.csv");
  writeFileSync(
    bad,
    "# schema_version=1\nt,user,snr_db,cr,rate_bps,latency_ms,q_true_db,q_oracle_db,satisfied,objective\n",
  );
  assert.throws(() => readRecordsCsv(bad), /no data rows/);
});
