/**
 * Contextual token encoders.
 *
 * The bundled "hash-encoder-v1" backend is fully offline and
 * deterministic: every token gets a base vector seeded by a 64-bit hash
 * of its text, and each occurrence is mixed with the mean of its window
 * neighbours, so the same token embeds differently in different
 * contexts. It stands in for a pretrained transformer in environments
 * where model weights cannot be downloaded; heavier backends implement
 * the same interface.
 */

export class ModelLoadError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "ModelLoadError";
  }
}

export class TokenEncodingError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "TokenEncodingError";
  }
}

export interface Encoder {
  readonly hiddenSize: number;
  readonly modelVersion: string;
  /** One contextual vector per position of the token sequence. */
  encodeSequence(tokens: string[]): Float64Array[];
}

const FNV_OFFSET = 0xcbf29ce484222325n;
const FNV_PRIME = 0x100000001b3n;
const MASK64 = 0xffffffffffffffffn;

export function fnv1a64(data: string): bigint {
  let hash = FNV_OFFSET;
  const bytes = Buffer.from(data, "utf-8");
  for (const byte of bytes) {
    hash ^= BigInt(byte);
    hash = (hash * FNV_PRIME) & MASK64;
  }
  return hash;
}

/** splitmix64: deterministic integer-only PRNG, uniform doubles in [0, 1). */
export function splitmix64(seed: bigint): () => number {
  let state = seed & MASK64;
  return () => {
    state = (state + 0x9e3779b97f4a7c15n) & MASK64;
    let z = state;
    z = ((z ^ (z >> 30n)) * 0xbf58476d1ce4e5b9n) & MASK64;
    z = ((z ^ (z >> 27n)) * 0x94d049bb133111ebn) & MASK64;
    z = z ^ (z >> 31n);
    // top 53 bits -> double in [0, 1)
    return Number(z >> 11n) / 9007199254740992;
  };
}

const CONTEXT_WINDOW = 2;
const SELF_WEIGHT = 0.8;
const CONTEXT_WEIGHT = 0.2;

export class HashProjectionEncoder implements Encoder {
  readonly hiddenSize: number;
  readonly modelVersion = "hash-encoder-v1";
  private readonly cache = new Map<string, Float64Array>();

  constructor(hiddenSize = 768) {
    this.hiddenSize = hiddenSize;
  }

  private baseVector(token: string): Float64Array {
    const cached = this.cache.get(token);
    if (cached !== undefined) {
      return cached;
    }
    const next = splitmix64(fnv1a64(token));
    const vec = new Float64Array(this.hiddenSize);
    for (let i = 0; i < this.hiddenSize; i++) {
      vec[i] = next() * 2 - 1;
    }
    this.cache.set(token, vec);
    return vec;
  }

  encodeSequence(tokens: string[]): Float64Array[] {
    const bases = tokens.map((t) => this.baseVector(t));
    const out: Float64Array[] = [];
    for (let i = 0; i < bases.length; i++) {
      const mixed = new Float64Array(this.hiddenSize);
      const lo = Math.max(0, i - CONTEXT_WINDOW);
      const hi = Math.min(bases.length - 1, i + CONTEXT_WINDOW);
      let neighbours = 0;
      for (let j = lo; j <= hi; j++) {
        if (j !== i) {
          neighbours++;
        }
      }
      for (let d = 0; d < this.hiddenSize; d++) {
        let ctx = 0;
        for (let j = lo; j <= hi; j++) {
          if (j !== i) {
            ctx += bases[j][d];
          }
        }
        mixed[d] =
          neighbours > 0
            ? SELF_WEIGHT * bases[i][d] + (CONTEXT_WEIGHT * ctx) / neighbours
            : bases[i][d];
      }
      out.push(mixed);
    }
    return out;
  }
}

export function loadEncoder(model: string): Encoder {
  if (model === "hash-encoder-v1") {
    return new HashProjectionEncoder();
  }
  throw new ModelLoadError(
    `unknown encoder model ${JSON.stringify(model)}; available: hash-encoder-v1 ` +
      `(pretrained transformer backends plug into the same Encoder interface)`
  );
}
