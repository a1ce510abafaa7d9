import * as fs from "node:fs";
import * as path from "node:path";
import { describe, expect, it } from "vitest";

import {
  NUM_CHANNELS,
  ParseFailure,
  readDataset,
  readShard,
  readWindowsCsv,
} from "../src/data.js";
import { generateDataset } from "../src/engine.js";
import {
  CH_FREQ,
  CH_SINE_COUNT,
  decodeRhythm,
  rerenderRhythm,
} from "../src/labels.js";
import { datasetDir, scratchDir, sunspotWindowsCsv } from "./helpers.js";

const N = 32;

describe("shard reading", () => {
  const dir = datasetDir(11, 8, N);

  it("parses the manifest and all records", () => {
    const { manifest, samples } = readDataset(dir);
    expect(manifest.format_version).toBe(1);
    expect(manifest.schema_version).toBe(1);
    expect(manifest.window_len).toBe(N);
    expect(manifest.count).toBe(8);
    expect(samples).toHaveLength(8);
    for (const s of samples) {
      expect(s.composite).toHaveLength(N);
      expect(s.rhythm).toHaveLength(N);
      expect(s.labels).toHaveLength(NUM_CHANNELS);
    }
  });

  it("returns composites on the shared [-1, 1] scale", () => {
    for (const s of readDataset(dir).samples) {
      for (const v of s.composite) {
        expect(v).toBeGreaterThanOrEqual(-1.000001);
        expect(v).toBeLessThanOrEqual(1.000001);
      }
    }
  });

  it("reads label slots that decode to the stored rhythm", () => {
    for (const s of readDataset(dir).samples) {
      const est = decodeRhythm(s.labels, N);
      expect(est.sineCount).toBeGreaterThanOrEqual(3);
      expect(est.sineCount).toBeLessThanOrEqual(10);
      // slots are sorted by frequency
      for (let j = 1; j < est.sineCount; j++) {
        expect(est.frequencies[j]).toBeGreaterThan(est.frequencies[j - 1]);
      }
      // the stored component carries its mix weight, so the label render
      // matches it up to one positive per-sample scale
      const rendered = rerenderRhythm(est, N);
      let mean = 0;
      for (const v of s.rhythm) mean += v;
      mean /= N;
      let num = 0;
      let den = 0;
      let targetEnergy = 0;
      const target = Array.from(s.rhythm, (v) => v - mean);
      for (let t = 0; t < N; t++) {
        num += rendered[t] * target[t];
        den += rendered[t] * rendered[t];
        targetEnergy += target[t] * target[t];
      }
      const scale = num / den;
      expect(scale).toBeGreaterThan(0);
      let resid = 0;
      for (let t = 0; t < N; t++) {
        const e = scale * rendered[t] - target[t];
        resid += e * e;
      }
      expect(Math.sqrt(resid / targetEnergy)).toBeLessThan(1e-4);
    }
  });

  it("keeps unused slots at the sentinel", () => {
    for (const s of readDataset(dir).samples) {
      const est = decodeRhythm(s.labels, N);
      for (let j = est.sineCount; j < 10; j++) {
        expect(s.labels[CH_FREQ + j]).toBe(-1);
      }
      expect(s.labels[CH_SINE_COUNT]).toBeGreaterThanOrEqual(0);
      expect(s.labels[CH_SINE_COUNT]).toBeLessThanOrEqual(1);
    }
  });

  it("regenerates byte-identical shards from the same seed", () => {
    const again = scratchDir("regen");
    // same seed and shape as the cached fixture, fresh output dir
    const first = datasetDir(11, 8, N);
    generateDataset({ seed: 11, count: 8, windowLen: N, outDir: again });
    const a = fs.readFileSync(path.join(first, "shard_0000.bin"));
    const b = fs.readFileSync(path.join(again, "shard_0000.bin"));
    expect(a.equals(b)).toBe(true);
  });

  it("rejects a corrupted magic", () => {
    const dst = path.join(scratchDir("badmagic"), "shard_0000.bin");
    const buf = fs.readFileSync(path.join(dir, "shard_0000.bin"));
    buf[0] ^= 0xff;
    fs.writeFileSync(dst, buf);
    expect(() => readShard(dst)).toThrow(ParseFailure);
  });

  it("rejects a truncated shard", () => {
    const dst = path.join(scratchDir("trunc"), "shard_0000.bin");
    const buf = fs.readFileSync(path.join(dir, "shard_0000.bin"));
    fs.writeFileSync(dst, buf.subarray(0, buf.length - 7));
    expect(() => readShard(dst)).toThrow(ParseFailure);
  });
});

describe("window files", () => {
  it("parses ingested windows at the declared length and scale", () => {
    const rows = readWindowsCsv(sunspotWindowsCsv(64, 8));
    expect(rows.length).toBeGreaterThan(10);
    for (const w of rows) {
      expect(w).toHaveLength(64);
      let lo = Infinity;
      let hi = -Infinity;
      for (const v of w) {
        lo = Math.min(lo, v);
        hi = Math.max(hi, v);
      }
      expect(lo).toBeCloseTo(-1, 6);
      expect(hi).toBeCloseTo(1, 6);
    }
  });

  it("rejects ragged rows", () => {
    const file = path.join(scratchDir("ragged"), "w.csv");
    fs.writeFileSync(file, "1,2,3\n1,2\n");
    expect(() => readWindowsCsv(file)).toThrow(ParseFailure);
  });
});
