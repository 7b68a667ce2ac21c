import assert from "node:assert/strict";
import { existsSync, mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { test } from "node:test";

import { main } from "../src/cli.js";

const FIXTURES = join(process.cwd(), "test", "fixtures");

test("writes an SVG for a valid spec", () => {
  const out = join(mkdtempSync(join(tmpdir(), "plots-")), "traces.svg");
  const code = main(["--spec", "psnr_traces", "--in", join(FIXTURES, "run"), "--out", out]);
  assert.equal(code, 0);
  assert.ok(existsSync(out));
});

test("usage errors exit 2", () => {
  assert.equal(main([]), 2);
  assert.equal(main(["--spec", "not_a_kind", "--in", "x", "--out", "y"]), 2);
});

test("empty CSV exits 1 and writes nothing", () => {
  const dir = mkdtempSync(join(tmpdir(), "plots-"));
  writeFileSync(
    join(dir, "records.csv"),
    "# schema_version=1\nt,user,snr_db,cr,rate_bps,latency_ms,q_true_db,q_oracle_db,satisfied,objective\n",
  );
  const out = join(dir, "out.svg");
  const code = main(["--spec", "latency_timeseries", "--in", dir, "--out", out]);
  assert.equal(code, 1);
  assert.ok(!existsSync(out));
});

test("window flag reaches the smoother", () => {
  const dir = mkdtempSync(join(tmpdir(), "plots-"));
  const a = join(dir, "w1.svg");
  const b = join(dir, "w9.svg");
  assert.equal(main(["--spec", "objective_timeseries", "--in", join(FIXTURES, "run"),
                     "--out", a, "--window", "1"]), 0);
  assert.equal(main(["--spec", "objective_timeseries", "--in", join(FIXTURES, "run"),
                     "--out", b, "--window", "9"]), 0);
  assert.ok(existsSync(a) && existsSync(b));
});
