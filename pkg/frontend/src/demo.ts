/**
 * End-to-end demo: sample a million points at d = 8, rho = 0.7, average
 * their log-densities (a Monte-Carlo estimate of the KL against the uniform
 * prior, since the density is taken w.r.t. that prior), and check the
 * estimate against the high-precision reference evaluator.
 *
 * The sampling and every log-density come from the core via its CLI; the
 * only arithmetic done here is the mean and its standard error.
 *
 * Run: npm run demo          (DEMO_N overrides the sample count)
 */

import { mkdtempSync, readFileSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { pathToFileURL } from "node:url";

import { SpCauchyClient } from "./index.js";

export interface DemoReport {
  n: number;
  mcMean: number;
  stderr: number;
  reference: number;
  gap: number;
  passed: boolean;
}

export function runDemo(n = Number(process.env.DEMO_N ?? 1_000_000)): DemoReport {
  const client = new SpCauchyClient();
  const d = 8;
  const rho = 0.7;
  const seed = 123;

  const dir = mkdtempSync(join(tmpdir(), "spcauchy-demo-"));
  try {
    const drawsPath = join(dir, "draws.csv");
    const logqPath = join(dir, "logq.csv");
    client.run([
      "sample", `--d=${d}`, `--rho=${rho}`,
      `--n=${n}`, `--seed=${seed}`,
      "--format", "csv", "-o", drawsPath,
    ]);
    client.run([
      "logdensity", `--d=${d}`, `--rho=${rho}`,
      `--input=${drawsPath}`, "--format", "csv", "-o", logqPath,
    ]);

    const lines = readFileSync(logqPath, "utf8").trim().split("\n");
    let sum = 0;
    let sumSq = 0;
    for (const line of lines) {
      const v = Number(line);
      sum += v;
      sumSq += v * v;
    }
    const count = lines.length;
    const mean = sum / count;
    const variance = (sumSq - count * mean * mean) / (count - 1);
    const stderr = Math.sqrt(variance / count);

    const reference = client.kl(d, rho, "reference").value;
    const gap = Math.abs(mean - reference);
    return { n: count, mcMean: mean, stderr, reference, gap, passed: gap < 4 * stderr };
  } finally {
    rmSync(dir, { recursive: true, force: true });
  }
}

function main(): void {
  const report = runDemo();
  console.log(`Monte-Carlo KL at d=8, rho=0.7 over n=${report.n} draws`);
  console.log(`  mc mean      ${report.mcMean.toFixed(6)} +- ${report.stderr.toFixed(6)}`);
  console.log(`  reference    ${report.reference.toFixed(6)}`);
  console.log(`  |gap|        ${report.gap.toExponential(3)} (4*stderr = ${(4 * report.stderr).toExponential(3)})`);
  console.log(report.passed ? "PASS: estimate within 4 standard errors" : "FAIL");
  process.exitCode = report.passed ? 0 : 1;
}

if (process.argv[1] && import.meta.url === pathToFileURL(process.argv[1]).href) {
  main();
}
