/**
 * Node wrapper around the `xmodmask` command line tool.
 *
 * `load(configPath)` returns a planner whose `planBatch(texts, ids)` yields
 * plain objects identical to the records the CLI writes to `plans.jsonl`
 * for the same inputs and seed.  Determinism is inherited from the CLI:
 * each sentence's randomness depends only on the run seed and its id, so
 * plans are stable under batch splitting and reordering.
 */

import { spawnSync } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

/** One replacement action for a single word piece. */
export interface PieceAction {
  /** Piece position within the sentence. */
  pos: number;
  /** "MASK" | "RANDOM" | "KEEP". */
  action: string;
  /** The original piece the model must predict. */
  gold: string;
}

/** One mask plan, mirroring a `plans.jsonl` record byte for byte. */
export interface PlanRecord {
  id: string;
  selected_words: number[];
  fallback_used: boolean;
  pieces: string[];
  actions: PieceAction[];
  masked_text: string;
}

export interface LoadOptions {
  /** Selection strategy; may instead come from the config file. */
  strategy?: string;
  /** Run seed (CLI `--seed`). */
  seed?: number;
  /** Per-word selection probability for Bernoulli strategies. */
  maskProbability?: number;
  /** Replacement proportions as "mask:random:keep", e.g. "0.8:0.1:0.1". */
  policy?: string;
  /** Class for the class-restricted strategy. */
  restrictedClass?: "stopword_punct" | "content";
  /** Python interpreter to spawn (default "python3"). */
  python?: string;
}

/**
 * Immutable handle over a resource/strategy configuration.  Safe to share
 * across callers; every `planBatch` call is independent.
 */
export class BoundPlanner {
  readonly configPath: string;
  readonly options: Readonly<LoadOptions>;

  constructor(configPath: string, options: LoadOptions = {}) {
    this.configPath = configPath;
    this.options = Object.freeze({ ...options });
    Object.freeze(this);
  }

  /**
   * Plan one batch of sentences.  `texts` and `ids` must be aligned;
   * records come back in input order.
   */
  planBatch(texts: readonly string[], ids: readonly string[]): PlanRecord[] {
    if (texts.length !== ids.length) {
      throw new Error(
        `planBatch: texts (${texts.length}) and ids (${ids.length}) ` +
          "must have the same length"
      );
    }
    if (texts.length === 0) {
      return [];
    }
    const workDir = mkdtempSync(join(tmpdir(), "xmodmask-"));
    try {
      const captionsPath = join(workDir, "captions.jsonl");
      const outPath = join(workDir, "plans.jsonl");
      const lines = ids.map((id, i) =>
        JSON.stringify({ id, image_id: id, text: texts[i] })
      );
      writeFileSync(captionsPath, lines.join("\n") + "\n");
      this.runCli(captionsPath, outPath);
      return readFileSync(outPath, "utf8")
        .split("\n")
        .filter((line) => line.length > 0)
        .map((line) => JSON.parse(line) as PlanRecord);
    } finally {
      rmSync(workDir, { recursive: true, force: true });
    }
  }

  private runCli(captionsPath: string, outPath: string): void {
    const opts = this.options;
    const args = [
      "-m",
      "xmodmask.cli",
      "mask",
      "--captions",
      captionsPath,
      "--config",
      this.configPath,
      "--out",
      outPath,
      "--jobs",
      "1",
    ];
    if (opts.strategy !== undefined) args.push("--strategy", opts.strategy);
    if (opts.seed !== undefined) args.push("--seed", String(opts.seed));
    if (opts.maskProbability !== undefined) {
      args.push("--p", String(opts.maskProbability));
    }
    if (opts.policy !== undefined) args.push("--policy", opts.policy);
    if (opts.restrictedClass !== undefined) {
      args.push("--class", opts.restrictedClass);
    }
    const result = spawnSync(opts.python ?? "python3", args, {
      encoding: "utf8",
    });
    if (result.error) {
      throw result.error;
    }
    if (result.status !== 0) {
      throw new Error(
        `xmodmask mask exited with status ${result.status}:\n${result.stderr}`
      );
    }
  }
}

/** Build a planner over a config file (resources + optional strategy). */
export function load(
  configPath: string,
  options: LoadOptions = {}
): BoundPlanner {
  return new BoundPlanner(configPath, options);
}
