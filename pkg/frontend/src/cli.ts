/**
 * Runner for the softfocus CLI.  The command defaults to
 * `python3 -m softfocus` and can be overridden with the SOFTFOCUS_CLI
 * environment variable (space-separated).
 */

import { execFileSync } from "node:child_process";
import { mkdtempSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

export function cliCommand(): string[] {
  const override = process.env.SOFTFOCUS_CLI;
  if (override && override.trim()) {
    return override.trim().split(/\s+/);
  }
  return ["python3", "-m", "softfocus"];
}

export function runCli(args: string[]): string {
  const [cmd, ...prefix] = cliCommand();
  try {
    return execFileSync(cmd, [...prefix, ...args], { encoding: "utf8" });
  } catch (err) {
    const e = err as { status?: number; stderr?: string };
    throw new Error(
      `softfocus CLI failed (exit ${e.status ?? "?"}): ${e.stderr ?? err}`,
    );
  }
}

export function cliVersion(): string {
  return runCli(["--version"]).trim();
}

/** Run fn with a private temp directory, removed afterwards. */
export function withTempDir<T>(fn: (dir: string) => T): T {
  const dir = mkdtempSync(join(tmpdir(), "softfocus-"));
  try {
    return fn(dir);
  } finally {
    rmSync(dir, { recursive: true, force: true });
  }
}
