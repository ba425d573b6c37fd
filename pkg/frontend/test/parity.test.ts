/**
 * Parity battery: the client must reproduce the core bit-for-bit, because
 * it only ever delegates.  Twenty randomized cases are split across the
 * three scalar entry points; sampling is compared row-for-row against a
 * direct CLI invocation under the same seed, and the demo's Monte-Carlo
 * cross-check runs in full.
 */

import assert from "node:assert/strict";
import { execFileSync } from "node:child_process";
import test from "node:test";

import { runDemo } from "../src/demo.js";
import { KL_METHODS, SpCauchyClient } from "../src/index.js";

const client = new SpCauchyClient();

function rawCli(args: string[]): string {
  const [executable, ...prefix] = client.command;
  return execFileSync(executable, [...prefix, ...args], {
    encoding: "utf8",
    maxBuffer: 1 << 28,
  });
}

/** Deterministic LCG so the "random" cases are reproducible. */
function makeRng(seed: number): () => number {
  let state = BigInt(seed);
  return () => {
    state = (state * 6364136223846793005n + 1442695040888963407n) & 0xffffffffffffffffn;
    return Number(state >> 11n) / 2 ** 53;
  };
}

test("logDensity is bit-identical to the core on random cases", () => {
  const rng = makeRng(7);
  for (let i = 0; i < 8; i++) {
    const d = 2 + Math.floor(rng() * 15);
    const rho = 0.99 * rng();
    const x = Array.from({ length: d }, () => 4 * rng() - 2);
    if (x.every((v) => Math.abs(v) < 1e-3)) {
      x[0] = 1;
    }
    const viaClient = client.logDensity(d, rho, x);
    const direct = (JSON.parse(
      rawCli([
        "logdensity", `--d=${d}`, `--rho=${rho}`,
        "--mu=north", `--x=${x.join(",")}`, "--format=json",
      ]),
    ) as number[])[0];
    assert.ok(Object.is(viaClient, direct), `case ${i}: ${viaClient} !== ${direct}`);
  }
});

test("kl is bit-identical to the core across methods", () => {
  const rng = makeRng(11);
  const methods = ["series", "quadrature", "combined", "hybrid", "midpoint", "laplace"] as const;
  for (let i = 0; i < 6; i++) {
    const d = 2 + Math.floor(rng() * 60);
    const rho = 0.995 * rng();
    const method = methods[i % methods.length];
    const viaClient = client.kl(d, rho, method);
    const direct = (JSON.parse(
      rawCli([
        "kl", `--d=${d}`, `--rho=${rho}`,
        `--method=${method}`, "--format=json",
      ]),
    ) as Record<string, unknown>[])[0];
    assert.ok(Object.is(viaClient.value, direct.value_or_time as number));
    assert.equal(viaClient.termsOrNodes, direct.terms_or_nodes);
    assert.equal(viaClient.converged, direct.converged);
  }
});

test("rhoMatch is bit-identical to the core", () => {
  const rng = makeRng(13);
  for (let i = 0; i < 6; i++) {
    const d = 2 + Math.floor(rng() * 100);
    const kappa = Math.exp(Math.log(1e-6) + rng() * Math.log(1e12));
    const viaClient = client.rhoMatch(d, kappa);
    const direct = (JSON.parse(
      rawCli(["match", `--d=${d}`, `--kappa=${kappa}`, "--format=json"]),
    ) as { rho: number }[])[0].rho;
    assert.ok(Object.is(viaClient, direct), `case ${i}: ${viaClient} !== ${direct}`);
  }
});

test("sample matches the CLI row-for-row under equal seeds", () => {
  const rows = client.sample(8, 0.7, 25, 42);
  const direct = rawCli([
    "sample", "--d", "8", "--rho", "0.7", "--n", "25", "--seed", "42", "--format", "csv",
  ])
    .trim()
    .split("\n")
    .map((line) => line.split(",").map(Number));
  assert.equal(rows.length, 25);
  assert.deepEqual(rows, direct);
  for (const row of rows) {
    const norm = Math.hypot(...row);
    assert.ok(Math.abs(norm - 1) < 1e-12, `row norm ${norm}`);
  }
});

test("unknown method raises a native error listing the valid names", () => {
  assert.throws(
    // @ts-expect-error deliberately bad method name
    () => client.kl(3, 0.5, "bogus"),
    (err: Error) =>
      err.message.includes("unknown KL method") &&
      KL_METHODS.every((name) => err.message.includes(name)),
  );
});

test("core validation errors carry the core's message text", () => {
  assert.throws(
    () => client.kl(3, 1.2, "combined"),
    (err: Error) => err.message.includes("[0, 1)"),
  );
});

test("inputs are normalized before evaluation", () => {
  const unit = client.logDensity(3, 0.5, [1, 0, 0]);
  const scaled = client.logDensity(3, 0.5, [2, 0, 0]);
  assert.ok(Object.is(unit, scaled));
  assert.ok(Math.abs(unit - 2 * Math.log(3)) < 1e-12);
});

test("demo: Monte-Carlo KL agrees with the reference within 4 stderr", () => {
  const report = runDemo();
  assert.ok(
    report.passed,
    `|${report.mcMean} - ${report.reference}| = ${report.gap} vs 4*stderr = ${4 * report.stderr}`,
  );
});
