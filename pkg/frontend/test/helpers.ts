/** Shared fixtures. Generated datasets and ingested window files are cached
 * under one tmp root keyed by their parameters, so repeated test runs and
 * multiple test files pay the subprocess cost once. */

import * as fs from "node:fs";
import * as path from "node:path";
import { fileURLToPath } from "node:url";

import { generateDataset, ingestSeries } from "../src/engine.js";

export const FIXTURE_ROOT = "/tmp/tsynth-train-fixtures";

const HERE = path.dirname(fileURLToPath(import.meta.url));
export const SUNSPOTS_CSV = path.join(HERE, "fixtures", "sunspots.csv");

export function datasetDir(seed: number, count: number, windowLen: number): string {
  const dir = path.join(FIXTURE_ROOT, `ds-${seed}-${count}-${windowLen}`);
  if (!fs.existsSync(path.join(dir, "manifest.json"))) {
    generateDataset({ seed, count, windowLen, outDir: dir });
  }
  return dir;
}

export function sunspotWindowsCsv(windowLen: number, stride: number): string {
  const out = path.join(FIXTURE_ROOT, `sun-${windowLen}-${stride}.csv`);
  if (!fs.existsSync(out)) {
    fs.mkdirSync(FIXTURE_ROOT, { recursive: true });
    ingestSeries({ input: SUNSPOTS_CSV, windowLen, stride, out });
  }
  return out;
}

export function scratchDir(name: string): string {
  const dir = path.join(FIXTURE_ROOT, "scratch", name);
  fs.rmSync(dir, { recursive: true, force: true });
  fs.mkdirSync(dir, { recursive: true });
  return dir;
}
