/** Drive the generator strictly through its CLI and wire formats. */

import { spawn, spawnSync } from "node:child_process";

export class EngineFailure extends Error {}
export class StreamFailure extends Error {}

const PY = process.env.TSYNTH_PYTHON ?? "python3";

function run(args: string[]): void {
  const res = spawnSync(PY, ["-m", "tsynth.cli", ...args], { encoding: "utf8" });
  if (res.error) throw new EngineFailure(String(res.error));
  if (res.status !== 0) {
    throw new EngineFailure(
      `tsynth ${args[0]} exited ${res.status}: ${res.stderr.trim()}`,
    );
  }
}

export function generateDataset(opts: {
  seed: number;
  count: number;
  windowLen: number;
  outDir: string;
}): void {
  run([
    "generate",
    "--seed", String(opts.seed),
    "--count", String(opts.count),
    "--window-len", String(opts.windowLen),
    "--out", opts.outDir,
  ]);
}

export function ingestSeries(opts: {
  input: string;
  windowLen: number;
  stride: number;
  out: string;
}): void {
  run([
    "ingest",
    "--in", opts.input,
    "--window-len", String(opts.windowLen),
    "--stride", String(opts.stride),
    "--out", opts.out,
  ]);
}

export interface StreamSource {
  seed: number;
  epochSize: number;
  windowLen: number;
  epochs: number;
  /** override the producer, mainly for fault-injection tests */
  command?: { cmd: string; args: string[] };
}

const HEAD_BYTES = 20;
const EPOCH_MAGIC = "TSE0";
const SAMPLE_MAGIC = "TSS0";

function producerArgs(src: StreamSource): { cmd: string; args: string[] } {
  if (src.command) return src.command;
  return {
    cmd: PY,
    args: [
      "-m", "tsynth.cli", "stream",
      "--seed", String(src.seed),
      "--epoch-size", String(src.epochSize),
      "--window-len", String(src.windowLen),
      "--epochs", String(src.epochs),
      "--pipe", "-",
    ],
  };
}

interface Frame {
  kind: "epoch" | "sample";
  epoch: number;
  composite: Float64Array | null;
}

/** Incremental frame splitter over stdout chunks. */
class FrameParser {
  private pending: Buffer = Buffer.alloc(0);
  constructor(private windowLen: number) {}

  push(chunk: Buffer): Frame[] {
    this.pending = this.pending.length
      ? Buffer.concat([this.pending, chunk])
      : chunk;
    const frames: Frame[] = [];
    for (;;) {
      if (this.pending.length < HEAD_BYTES) break;
      const magic = this.pending.toString("latin1", 0, 4);
      const epoch = this.pending.readUInt32LE(4);
      const channels = this.pending.readUInt32LE(12);
      const n = this.pending.readUInt32LE(16);
      if (n !== this.windowLen) throw new StreamFailure(`frame N=${n}`);
      if (magic === EPOCH_MAGIC) {
        frames.push({ kind: "epoch", epoch, composite: null });
        this.pending = this.pending.subarray(HEAD_BYTES);
        continue;
      }
      if (magic !== SAMPLE_MAGIC) throw new StreamFailure("bad frame magic");
      const payload = HEAD_BYTES + (n + channels * n) * 4;
      if (this.pending.length < payload) break;
      const composite = new Float64Array(n);
      for (let t = 0; t < n; t++) {
        composite[t] = this.pending.readFloatLE(HEAD_BYTES + t * 4);
      }
      frames.push({ kind: "sample", epoch, composite });
      this.pending = this.pending.subarray(payload); // labels not needed here
    }
    return frames;
  }
}

/**
 * Consume the epoch stream, handing each COMPLETE epoch's composites to the
 * callback; partial epochs are never delivered. A producer dying mid-epoch
 * gets one retry: respawn (regeneration is deterministic), fast-forward
 * over the epochs already handled, resume. A second loss of the same epoch
 * raises StreamFailure.
 */
export async function consumeStream(
  src: StreamSource,
  onEpoch: (epoch: number, composites: Float64Array[]) => void,
): Promise<void> {
  let done = 0; // epochs fully delivered
  let lastFailure = -1;

  while (done < src.epochs) {
    const got = await runProducerOnce(src, done, onEpoch);
    if (got >= src.epochs) return;
    if (got === lastFailure) {
      throw new StreamFailure(
        `stream lost twice at epoch ${got} of ${src.epochs}`,
      );
    }
    lastFailure = got;
    done = got;
  }
}

function runProducerOnce(
  src: StreamSource,
  skipEpochs: number,
  onEpoch: (epoch: number, composites: Float64Array[]) => void,
): Promise<number> {
  const { cmd, args } = producerArgs(src);
  const child = spawn(cmd, args, { stdio: ["ignore", "pipe", "inherit"] });
  const parser = new FrameParser(src.windowLen);
  let delivered = skipEpochs;
  let bucket: Float64Array[] = [];
  let bucketEpoch = -1;

  return new Promise((resolve, reject) => {
    const flush = () => {
      if (bucketEpoch >= skipEpochs && bucket.length === src.epochSize) {
        onEpoch(bucketEpoch, bucket);
        delivered = bucketEpoch + 1;
      }
      bucket = [];
    };
    child.stdout.on("data", (chunk: Buffer) => {
      let frames: Frame[];
      try {
        frames = parser.push(chunk);
      } catch (err) {
        child.kill();
        reject(err);
        return;
      }
      for (const f of frames) {
        if (f.kind === "epoch") {
          flush();
          bucketEpoch = f.epoch;
        } else if (f.epoch >= skipEpochs) {
          bucket.push(f.composite!);
        }
      }
    });
    child.on("error", (err) => reject(new EngineFailure(String(err))));
    child.on("close", () => {
      flush();
      resolve(delivered);
    });
  });
}
