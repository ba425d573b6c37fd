/**
 * Thin client for the spcauchy command-line interface.
 *
 * Every method delegates to the CLI in a subprocess and parses its JSON/CSV
 * output; no formula is re-implemented here, so numbers are bit-identical
 * to the core by construction (the CLI prints floats with round-trip
 * precision).  Core validation errors surface as plain `Error`s carrying
 * the core's message text.
 */

import { execFileSync } from "node:child_process";

export const KL_METHODS = [
  "series",
  "quadrature",
  "asymptotic",
  "asymptotic_high_rho",
  "combined",
  "hybrid",
  "midpoint",
  "laplace",
  "closed",
  "closed_form_low_d",
  "reference",
] as const;

export type KlMethodName = (typeof KL_METHODS)[number];

export interface KlResult {
  value: number;
  method: string;
  termsOrNodes: number;
  converged: boolean;
}

export interface MatchedPair {
  d: number;
  rho: number;
  kappa: number;
}

export interface ClientOptions {
  /** Command vector used to launch the CLI; defaults to SPCAUCHY_CLI or
   *  ["python3", "-m", "spcauchy.cli"]. */
  command?: string[];
  /** stdout buffer cap for subprocess calls (bulk sampling can be large). */
  maxBuffer?: number;
}

function defaultCommand(): string[] {
  const fromEnv = process.env.SPCAUCHY_CLI;
  if (fromEnv && fromEnv.trim().length > 0) {
    return fromEnv.trim().split(/\s+/);
  }
  return ["python3", "-m", "spcauchy.cli"];
}

function muArg(mu: "north" | number[]): string {
  return mu === "north" ? "north" : mu.join(",");
}

export class SpCauchyClient {
  readonly command: string[];
  readonly maxBuffer: number;

  constructor(options: ClientOptions = {}) {
    this.command = options.command ?? defaultCommand();
    this.maxBuffer = options.maxBuffer ?? 1 << 28;
  }

  /** Run a raw CLI invocation and return stdout; throws on nonzero exit. */
  run(args: string[]): string {
    const [executable, ...prefix] = this.command;
    try {
      return execFileSync(executable, [...prefix, ...args], {
        encoding: "utf8",
        maxBuffer: this.maxBuffer,
      });
    } catch (err) {
      const stderr = (err as { stderr?: string }).stderr;
      if (typeof stderr === "string" && stderr.trim().length > 0) {
        throw new Error(stderr.trim());
      }
      throw err;
    }
  }

  /** Log-density of x under spCauchy(mu, rho) w.r.t. the uniform measure.
   *  The input is normalized by the core before evaluation. */
  logDensity(d: number, rho: number, x: number[], mu: "north" | number[] = "north"): number {
    const out = this.run([
      "logdensity",
      `--d=${d}`,
      `--rho=${rho}`,
      `--mu=${muArg(mu)}`,
      `--x=${x.join(",")}`,
      "--format=json",
    ]);
    const values = JSON.parse(out) as number[];
    return values[0];
  }

  /** KL(spCauchy(mu, rho) || uniform) with a selectable evaluator. */
  kl(d: number, rho: number, method: KlMethodName = "combined"): KlResult {
    if (!KL_METHODS.includes(method)) {
      throw new Error(
        `unknown KL method "${method}"; valid names: ${KL_METHODS.join(", ")}`,
      );
    }
    const out = this.run([
      "kl",
      `--d=${d}`,
      `--rho=${rho}`,
      `--method=${method}`,
      "--format=json",
    ]);
    const record = (JSON.parse(out) as Record<string, unknown>[])[0];
    return {
      value: record.value_or_time as number,
      method: record.method as string,
      termsOrNodes: record.terms_or_nodes as number,
      converged: record.converged as boolean,
    };
  }

  /** Reparameterized draws; deterministic for a fixed seed and identical
   *  row-for-row to `spcauchy sample` with the same flags. */
  sample(
    d: number,
    rho: number,
    n: number,
    seed: number,
    mu: "north" | number[] = "north",
  ): number[][] {
    const out = this.run([
      "sample",
      `--d=${d}`,
      `--rho=${rho}`,
      `--n=${n}`,
      `--seed=${seed}`,
      `--mu=${muArg(mu)}`,
      "--format=json",
    ]);
    return JSON.parse(out) as number[][];
  }

  /** Spherical Cauchy concentration with the same local curvature as a
   *  vMF with concentration kappa. */
  rhoMatch(d: number, kappa: number): number {
    return this.match(d, { kappa }).rho;
  }

  /** Complete a curvature-matched (d, rho, kappa) triple. */
  match(d: number, given: { rho?: number; kappa?: number }): MatchedPair {
    const args = ["match", `--d=${d}`, "--format=json"];
    if (given.rho !== undefined) {
      args.push(`--rho=${given.rho}`);
    }
    if (given.kappa !== undefined) {
      args.push(`--kappa=${given.kappa}`);
    }
    const record = (JSON.parse(this.run(args)) as MatchedPair[])[0];
    return record;
  }
}
