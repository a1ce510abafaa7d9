/** Readers for the generator's on-disk formats.
 *
 * Binary shards: 64-byte little-endian header (8-byte magic "TSYNSHRD",
 * u32 format version, u32 schema version, u32 channel count, u32 window
 * length, u64 record count, zero padding), then packed float32 records of
 * composite | rhythm | noise | trend | label matrix (C rows of N).
 *
 * Window files: one comma-separated window per row.
 */

import * as fs from "node:fs";
import * as path from "node:path";

export const SHARD_MAGIC = "TSYNSHRD";
export const FORMAT_VERSION = 1;
export const SCHEMA_VERSION = 1;
export const NUM_CHANNELS = 43;

export class SchemaMismatch extends Error {}
export class ParseFailure extends Error {}

export interface Manifest {
  engine_version: string;
  format_version: number;
  schema_version: number;
  seed: number;
  count: number;
  window_len: number;
  format: string;
  config: Record<string, unknown>;
  channel_names: string[];
  files: { name: string; records: number; sha256: string }[];
}

export interface Sample {
  composite: Float64Array;
  rhythm: Float64Array;
  /** one value per label channel; channels are constant along time */
  labels: Float64Array;
}

export function readManifest(dir: string): Manifest {
  const m = JSON.parse(
    fs.readFileSync(path.join(dir, "manifest.json"), "utf8"),
  ) as Manifest;
  assertSchema(m.format_version, m.schema_version);
  return m;
}

export function assertSchema(formatVersion: number, schemaVersion: number): void {
  if (formatVersion !== FORMAT_VERSION || schemaVersion !== SCHEMA_VERSION) {
    throw new SchemaMismatch(
      `need format v${FORMAT_VERSION} / schema v${SCHEMA_VERSION}, ` +
        `got v${formatVersion} / v${schemaVersion}`,
    );
  }
}

export interface ShardHeader {
  formatVersion: number;
  schemaVersion: number;
  channels: number;
  windowLen: number;
  count: number;
}

export function readShardHeader(buf: Buffer): ShardHeader {
  if (buf.length < 64 || buf.toString("latin1", 0, 8) !== SHARD_MAGIC) {
    throw new ParseFailure("not a shard file");
  }
  const header = {
    formatVersion: buf.readUInt32LE(8),
    schemaVersion: buf.readUInt32LE(12),
    channels: buf.readUInt32LE(16),
    windowLen: buf.readUInt32LE(20),
    count: Number(buf.readBigUInt64LE(24)),
  };
  assertSchema(header.formatVersion, header.schemaVersion);
  return header;
}

/** Load every record of one shard, keeping the parts training needs. */
export function readShard(file: string): { header: ShardHeader; samples: Sample[] } {
  const buf = fs.readFileSync(file);
  const header = readShardHeader(buf);
  const n = header.windowLen;
  const c = header.channels;
  const recordFloats = n * (4 + c);
  const expected = 64 + header.count * recordFloats * 4;
  if (buf.length !== expected) {
    throw new ParseFailure(`shard is ${buf.length} bytes, expected ${expected}`);
  }
  const samples: Sample[] = [];
  for (let r = 0; r < header.count; r++) {
    const base = 64 + r * recordFloats * 4;
    const composite = new Float64Array(n);
    const rhythm = new Float64Array(n);
    for (let t = 0; t < n; t++) {
      composite[t] = buf.readFloatLE(base + t * 4);
      rhythm[t] = buf.readFloatLE(base + (n + t) * 4);
    }
    const labels = new Float64Array(c);
    const labelBase = base + 4 * n * 4; // skip the four series blocks
    for (let ch = 0; ch < c; ch++) {
      labels[ch] = buf.readFloatLE(labelBase + ch * n * 4);
    }
    samples.push({ composite, rhythm, labels });
  }
  return { header, samples };
}

/** All samples of a generated dataset, shards in manifest order. */
export function readDataset(dir: string): { manifest: Manifest; samples: Sample[] } {
  const manifest = readManifest(dir);
  const samples: Sample[] = [];
  for (const entry of manifest.files) {
    if (!entry.name.endsWith(".bin")) continue;
    const { header, samples: part } = readShard(path.join(dir, entry.name));
    if (header.windowLen !== manifest.window_len) {
      throw new ParseFailure(`shard ${entry.name} window ${header.windowLen}`);
    }
    samples.push(...part);
  }
  if (samples.length !== manifest.count) {
    throw new ParseFailure(
      `manifest says ${manifest.count} records, shards hold ${samples.length}`,
    );
  }
  return { manifest, samples };
}

export function readWindowsCsv(file: string): Float64Array[] {
  const text = fs.readFileSync(file, "utf8");
  const rows: Float64Array[] = [];
  for (const line of text.split("\n")) {
    if (!line.trim()) continue;
    const parts = line.split(",");
    const row = new Float64Array(parts.length);
    for (let i = 0; i < parts.length; i++) {
      const v = Number(parts[i]);
      if (!Number.isFinite(v)) throw new ParseFailure(`bad value '${parts[i]}'`);
      row[i] = v;
    }
    if (rows.length && row.length !== rows[0].length) {
      throw new ParseFailure("ragged window rows");
    }
    rows.push(row);
  }
  return rows;
}
