/**
 * Export per-token vectors into the shared vector file format.
 *
 * Tokens come from a list file (one token per line, unique). Without a
 * corpus, every token is encoded as its own one-token sequence. With a
 * corpus file (whitespace-separated token lines, streams separated by a
 * blank line, i.e. the training pipeline's corpus format), each requested
 * token is encoded at every position it occupies and the occurrence
 * vectors are pooled: "mean" averages them, "first" keeps the first in
 * stream order. Tokens absent from the corpus fall back to isolated
 * encoding.
 */

import * as fs from "fs";

import { Encoder, TokenEncodingError, loadEncoder } from "./encoder";
import { VectorEntry, formatVectorFile } from "./vectorfile";

export type Pooling = "mean" | "first";

export interface ExportRequest {
  tokenListPath: string;
  outputVectorPath: string;
  model: string;
  pooling: Pooling;
  corpusPath?: string;
}

export interface ExportResult {
  count: number;
  dim: number;
  modelVersion: string;
  fromCorpus: number;
}

export function readTokenList(path: string): string[] {
  const lines = fs
    .readFileSync(path, "utf-8")
    .split("\n")
    .map((line) => line.replace(/\r$/, ""))
    .filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new Error(`token list ${path} is empty`);
  }
  const seen = new Set<string>();
  for (const token of lines) {
    if (/\s/.test(token)) {
      throw new Error(
        `token ${JSON.stringify(token)} contains whitespace and cannot be ` +
          `represented in the vector file format`
      );
    }
    if (seen.has(token)) {
      throw new Error(`duplicate token in list: ${JSON.stringify(token)}`);
    }
    seen.add(token);
  }
  return lines;
}

export function readCorpusStreams(path: string): string[][] {
  const blocks = fs
    .readFileSync(path, "utf-8")
    .split(/\n\s*\n/)
    .map((block) => block.split(/\s+/).filter((t) => t.length > 0))
    .filter((tokens) => tokens.length > 0);
  return blocks;
}

function zeroVector(dim: number): Float64Array {
  return new Float64Array(dim);
}

function meanOf(vectors: Float64Array[], dim: number): Float64Array {
  const out = new Float64Array(dim);
  for (const vec of vectors) {
    for (let d = 0; d < dim; d++) {
      out[d] += vec[d];
    }
  }
  for (let d = 0; d < dim; d++) {
    out[d] /= vectors.length;
  }
  return out;
}

function encodeIsolated(encoder: Encoder, token: string): Float64Array {
  try {
    return encoder.encodeSequence([token])[0];
  } catch (err) {
    if (err instanceof TokenEncodingError) {
      console.warn(`cannot encode ${JSON.stringify(token)}, writing zero vector: ${err.message}`);
      return zeroVector(encoder.hiddenSize);
    }
    throw err;
  }
}

export function exportTokenVectors(req: ExportRequest): ExportResult {
  // The token list is validated (non-empty, unique, representable)
  // before any model is loaded or called.
  const tokens = readTokenList(req.tokenListPath);
  const encoder = loadEncoder(req.model);
  const dim = encoder.hiddenSize;

  const occurrences = new Map<string, Float64Array[]>();
  if (req.corpusPath !== undefined) {
    const wanted = new Set(tokens);
    for (const stream of readCorpusStreams(req.corpusPath)) {
      let encoded: Float64Array[] | null = null;
      for (let pos = 0; pos < stream.length; pos++) {
        if (!wanted.has(stream[pos])) {
          continue;
        }
        if (encoded === null) {
          encoded = encoder.encodeSequence(stream);
        }
        const bucket = occurrences.get(stream[pos]);
        if (bucket === undefined) {
          occurrences.set(stream[pos], [encoded[pos]]);
        } else {
          bucket.push(encoded[pos]);
        }
      }
    }
  }

  let fromCorpus = 0;
  const entries: VectorEntry[] = tokens.map((token) => {
    const found = occurrences.get(token);
    if (found === undefined || found.length === 0) {
      return { token, vector: encodeIsolated(encoder, token) };
    }
    fromCorpus++;
    const vector = req.pooling === "first" ? found[0] : meanOf(found, dim);
    return { token, vector };
  });

  for (const { token, vector } of entries) {
    for (const value of vector) {
      if (!Number.isFinite(value)) {
        throw new TokenEncodingError(`non-finite coordinate for ${JSON.stringify(token)}`);
      }
    }
  }

  fs.writeFileSync(req.outputVectorPath, formatVectorFile(entries, dim), "utf-8");
  return { count: entries.length, dim, modelVersion: encoder.modelVersion, fromCorpus };
}
