/**
 * Click file schema: JSON object with extreme_points / fpc / fnc as lists
 * of [row, col] pairs, optional grid [height, width] and seed.
 */

export type Coord = [number, number];

export interface ClickDocument {
  extreme_points: Coord[];
  fpc: Coord[];
  fnc: Coord[];
  grid?: [number, number];
  seed?: number;
}

function coordList(raw: unknown, key: string): Coord[] {
  if (raw === undefined || raw === null) return [];
  if (!Array.isArray(raw)) throw new Error(`click file: ${key} is not a list`);
  return raw.map((entry) => {
    if (!Array.isArray(entry) || entry.length !== 2) {
      throw new Error(`click file: ${key} entries must be [row, col]`);
    }
    const [r, c] = entry;
    if (typeof r !== "number" || typeof c !== "number" || !isFinite(r) || !isFinite(c)) {
      throw new Error(`click file: ${key} contains non-finite coordinates`);
    }
    return [r, c];
  });
}

export function parseClickFile(text: string): ClickDocument {
  const obj = JSON.parse(text);
  if (typeof obj !== "object" || obj === null || Array.isArray(obj)) {
    throw new Error("click file: top level must be an object");
  }
  const doc: ClickDocument = {
    extreme_points: coordList(obj.extreme_points, "extreme_points"),
    fpc: coordList(obj.fpc, "fpc"),
    fnc: coordList(obj.fnc, "fnc"),
  };
  if (obj.grid !== undefined && obj.grid !== null) {
    if (!Array.isArray(obj.grid) || obj.grid.length !== 2) {
      throw new Error("click file: grid must be [height, width]");
    }
    doc.grid = [Number(obj.grid[0]), Number(obj.grid[1])];
  }
  if (obj.seed !== undefined && obj.seed !== null) {
    doc.seed = Number(obj.seed);
  }
  return doc;
}

export function serializeClickFile(doc: ClickDocument): string {
  const body: Record<string, unknown> = {
    extreme_points: doc.extreme_points,
    fpc: doc.fpc,
    fnc: doc.fnc,
  };
  if (doc.grid) body.grid = doc.grid;
  if (doc.seed !== undefined) body.seed = doc.seed;
  return JSON.stringify(body, null, 2) + "\n";
}
