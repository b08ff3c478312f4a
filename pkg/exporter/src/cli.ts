#!/usr/bin/env node
/**
 * export --tokens PATH --out PATH --model NAME --pooling mean|first [--corpus PATH]
 *
 * Exit codes: 0 success, 1 domain error (model/encoding), 2 usage error.
 */

import { ModelLoadError, TokenEncodingError } from "./encoder";
import { ExportRequest, Pooling, exportTokenVectors } from "./exporter";

const USAGE =
  "usage: cli.js export --tokens PATH --out PATH --model NAME " +
  "--pooling mean|first [--corpus PATH]";

function parseArgs(argv: string[]): ExportRequest {
  if (argv[0] !== "export") {
    throw new UsageError(`unknown subcommand ${JSON.stringify(argv[0])}\n${USAGE}`);
  }
  const flags = new Map<string, string>();
  for (let i = 1; i < argv.length; i += 2) {
    const flag = argv[i];
    const value = argv[i + 1];
    if (!flag.startsWith("--") || value === undefined) {
      throw new UsageError(`bad argument ${JSON.stringify(flag)}\n${USAGE}`);
    }
    flags.set(flag.slice(2), value);
  }
  const known = new Set(["tokens", "out", "model", "pooling", "corpus"]);
  for (const key of flags.keys()) {
    if (!known.has(key)) {
      throw new UsageError(`unknown flag --${key}\n${USAGE}`);
    }
  }
  for (const required of ["tokens", "out", "model"]) {
    if (!flags.has(required)) {
      throw new UsageError(`missing --${required}\n${USAGE}`);
    }
  }
  const pooling = flags.get("pooling") ?? "mean";
  if (pooling !== "mean" && pooling !== "first") {
    throw new UsageError(`--pooling must be mean or first, got ${pooling}`);
  }
  return {
    tokenListPath: flags.get("tokens")!,
    outputVectorPath: flags.get("out")!,
    model: flags.get("model")!,
    pooling: pooling as Pooling,
    corpusPath: flags.get("corpus"),
  };
}

class UsageError extends Error {}

function main(argv: string[]): number {
  let request: ExportRequest;
  try {
    request = parseArgs(argv);
  } catch (err) {
    console.error(err instanceof Error ? err.message : String(err));
    return 2;
  }
  try {
    const result = exportTokenVectors(request);
    console.log(
      `exported ${result.count} token vector(s) at dim ${result.dim} ` +
        `(${result.modelVersion}, ${result.fromCorpus} pooled from corpus) -> ` +
        request.outputVectorPath
    );
    return 0;
  } catch (err) {
    if (err instanceof ModelLoadError || err instanceof TokenEncodingError) {
      console.error(`${err.name}: ${err.message}`);
      return 1;
    }
    console.error(err instanceof Error ? err.message : String(err));
    return 1;
  }
}

process.exit(main(process.argv.slice(2)));
