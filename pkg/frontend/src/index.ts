/**
 * Bindings for data-pipeline code: encode soft-focus guidance fields and
 * extract extreme points through the softfocus CLI, exchanging contiguous
 * row-major buffers.  Every call is stateless; buffers are fresh copies.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { join } from "node:path";

import { parseClickFile, serializeClickFile, type Coord } from "./clickfile.js";
import { cliVersion, runCli, withTempDir } from "./cli.js";
import { encodeGrayPng } from "./png.js";
import { parseSff, type BoundField } from "./sff.js";

export { parseClickFile, serializeClickFile, type ClickDocument, type Coord } from "./clickfile.js";
export { cliCommand, cliVersion, runCli } from "./cli.js";
export { crc32, encodeGrayPng } from "./png.js";
export { parseSff, serializeSff, type BoundField } from "./sff.js";

/** Matches the core package version; verified against the CLI in tests. */
export const VERSION = "0.1.0";

export interface EncodeOptions {
  points: Coord[];
  fpc?: Coord[];
  fnc?: Coord[];
  height: number;
  width: number;
  beta?: number;
  sigma?: number;
  margin?: number;
}

/**
 * Encode extreme points and corrective clicks into a guidance field.
 * Numerically identical to the CLI `encode` output at f32 precision
 * (it is the CLI output, parsed from the SFF1 payload).
 */
export function bindEncode(options: EncodeOptions): BoundField {
  const { points, height, width } = options;
  if (!points || points.length < 2) {
    throw new Error("bindEncode: need at least 2 extreme points");
  }
  return withTempDir((dir) => {
    const clickPath = join(dir, "clicks.json");
    const fieldPath = join(dir, "field.sff");
    writeFileSync(
      clickPath,
      serializeClickFile({
        extreme_points: points,
        fpc: options.fpc ?? [],
        fnc: options.fnc ?? [],
        grid: [height, width],
      }),
    );
    const args = [
      "encode",
      "--points", clickPath,
      "--size", `${height}x${width}`,
      "--out", fieldPath,
    ];
    if (options.beta !== undefined) args.push("--beta", String(options.beta));
    if (options.sigma !== undefined) args.push("--sigma", String(options.sigma));
    if (options.margin !== undefined) args.push("--margin", String(options.margin));
    runCli(args);
    return parseSff(new Uint8Array(readFileSync(fieldPath)));
  });
}

export interface ExtractOptions {
  /** Row-major foreground flags (nonzero = foreground), length height*width. */
  mask: Uint8Array;
  height: number;
  width: number;
  num?: 3 | 4;
  noise?: number;
  seed?: number;
}

/**
 * Extract (optionally noised) extreme points from a mask buffer.
 * Deterministic per seed; matches the CLI `extract-points` output exactly.
 */
export function bindExtractPoints(options: ExtractOptions): Coord[] {
  const { mask, height, width } = options;
  return withTempDir((dir) => {
    const maskPath = join(dir, "mask.png");
    const outPath = join(dir, "points.json");
    writeFileSync(maskPath, encodeGrayPng(mask, height, width));
    runCli([
      "extract-points",
      "--mask", maskPath,
      "--num", String(options.num ?? 4),
      "--noise", String(options.noise ?? 0),
      "--seed", String(options.seed ?? 0),
      "--out", outPath,
    ]);
    return parseClickFile(readFileSync(outPath, "utf8")).extreme_points;
  });
}

/** True when the CLI on PATH reports the same version as these bindings. */
export function versionMatchesCli(): boolean {
  return cliVersion() === VERSION;
}
