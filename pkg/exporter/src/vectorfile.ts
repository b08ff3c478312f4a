/**
 * The vector file interchange format consumed by the training pipeline:
 * a header line "V dim" followed by V lines of
 * "token v1 ... v_dim" with 6-decimal fixed-point coordinates.
 */

export interface VectorEntry {
  token: string;
  vector: Float64Array;
}

export function formatVectorFile(entries: VectorEntry[], dim: number): string {
  const lines: string[] = [`${entries.length} ${dim}`];
  for (const { token, vector } of entries) {
    if (vector.length !== dim) {
      throw new Error(`vector for ${JSON.stringify(token)} has length ${vector.length}, expected ${dim}`);
    }
    const coords = Array.from(vector, (x) => x.toFixed(6)).join(" ");
    lines.push(`${token} ${coords}`);
  }
  return lines.join("\n") + "\n";
}

/** Parse the format back (used by tests to check what we wrote). */
export function parseVectorFile(text: string): { dim: number; table: Map<string, Float64Array> } {
  const lines = text.split("\n");
  const header = lines[0].trim().split(/\s+/);
  if (header.length !== 2) {
    throw new Error(`bad header: ${JSON.stringify(lines[0])}`);
  }
  const count = Number(header[0]);
  const dim = Number(header[1]);
  if (!Number.isInteger(count) || !Number.isInteger(dim) || dim < 1 || count < 0) {
    throw new Error(`bad header values: ${JSON.stringify(lines[0])}`);
  }
  const table = new Map<string, Float64Array>();
  for (let i = 1; i <= count; i++) {
    const fields = lines[i].split(/\s+/).filter((f) => f.length > 0);
    if (fields.length !== dim + 1) {
      throw new Error(`line ${i + 1}: expected ${dim + 1} fields, got ${fields.length}`);
    }
    const vec = new Float64Array(dim);
    for (let j = 0; j < dim; j++) {
      const value = Number(fields[j + 1]);
      if (!Number.isFinite(value)) {
        throw new Error(`line ${i + 1}: non-numeric coordinate ${fields[j + 1]}`);
      }
      vec[j] = value;
    }
    table.set(fields[0], vec);
  }
  return { dim, table };
}
