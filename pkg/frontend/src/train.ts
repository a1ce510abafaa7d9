/** Training loops for the two tasks, plus the run report shape. */

import { Sample, SchemaMismatch } from "./data.js";
import { StreamSource, consumeStream } from "./engine.js";
import {
  PEAK_SLOTS,
  RhythmEstimate,
  decodeRhythm,
  extractorFeatures,
  peakSlotStart,
  rerenderRhythm,
} from "./labels.js";
import { Family, Model, makeAutoencoder, makeExtractor } from "./models.js";
import { Rng } from "./rng.js";

export type Mode = "real" | "sync" | "unlimit";

export interface TrainOptions {
  epochs: number;
  lr: number;
  seed: number;
  batch?: number;
  /** linearly decay the step size to this fraction of lr by the last epoch */
  lrFinalFrac?: number;
  /** which stored component the extractor task reads its input windows from */
  input?: "composite" | "rhythm";
}

export interface RunReport {
  mode: Mode;
  model: Family;
  epochs: number;
  lr: number;
  seed: number;
  samplesPerEpoch: number;
  trainLoss: number[];
  valiLoss: number[];
  minValiLoss: number | null;
  /** 1-based epoch of the minimum, first occurrence */
  minValiLossEpoch: number | null;
  /** fingerprint of each epoch's training data as delivered */
  epochHashes: string[];
}

const DEFAULT_BATCH = 32;

/** min-max onto [-1, 1], the frame ingested real windows arrive in; a
 * constant window maps to zeros. Applied to every window the
 * reconstruction task sees so synthetic and real inputs share one scale. */
export function scaleWindow(window: Float64Array): Float64Array {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of window) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  const out = new Float64Array(window.length);
  if (hi === lo) return out;
  const span = hi - lo;
  for (let i = 0; i < window.length; i++) out[i] = ((window[i] - lo) / span) * 2 - 1;
  return out;
}

export { extractorFeatures } from "./labels.js";

function mseAndGrad(y: Float64Array, target: Float64Array, dy: Float64Array): number {
  const d = y.length;
  let loss = 0;
  for (let i = 0; i < d; i++) {
    const e = y[i] - target[i];
    loss += e * e;
    dy[i] = (2 * e) / d;
  }
  return loss / d;
}

function meanMse(model: Model, inputs: Float64Array[], targets: Float64Array[]): number {
  let total = 0;
  for (let i = 0; i < inputs.length; i++) {
    const y = model.forward(inputs[i]);
    const t = targets[i];
    let s = 0;
    for (let j = 0; j < y.length; j++) {
      const e = y[j] - t[j];
      s += e * e;
    }
    total += s / y.length;
  }
  return total / inputs.length;
}

/** FNV-1a over the float bytes of the first windows of an epoch */
function epochHash(windows: Float64Array[]): string {
  let h = 0xcbf29ce484222325n;
  const prime = 0x100000001b3n;
  const mask = (1n << 64n) - 1n;
  const take = Math.min(windows.length, 32);
  for (let w = 0; w < take; w++) {
    const bytes = new Uint8Array(windows[w].buffer, windows[w].byteOffset, windows[w].byteLength);
    for (let i = 0; i < bytes.length; i++) {
      h = ((h ^ BigInt(bytes[i])) * prime) & mask;
    }
  }
  return h.toString(16).padStart(16, "0");
}

function epochLr(opts: TrainOptions, epoch: number): number {
  const frac = opts.lrFinalFrac ?? 1;
  if (opts.epochs <= 1) return opts.lr;
  return opts.lr * (1 - (1 - frac) * (epoch / (opts.epochs - 1)));
}

function sgdEpoch(
  model: Model,
  inputs: Float64Array[],
  targets: Float64Array[],
  order: Int32Array,
  lr: number,
  batch: number,
  dy: Float64Array,
): number {
  let epochLoss = 0;
  let inBatch = 0;
  for (let q = 0; q < order.length; q++) {
    const i = order[q];
    const y = model.forward(inputs[i]);
    epochLoss += mseAndGrad(y, targets[i], dy);
    model.backward(dy);
    inBatch++;
    if (inBatch === batch || q === order.length - 1) {
      model.step(lr, inBatch);
      inBatch = 0;
    }
  }
  return epochLoss / order.length;
}

export interface ExtractorRun {
  model: Model;
  untrained: Model;
  trainLoss: number[];
  valiLoss: number[];
  untrainedValiLoss: number;
}

/** Supervised label regression on a fixed synthetic dataset. */
export function trainExtractor(
  family: Family,
  trainSamples: Sample[],
  valSamples: Sample[],
  windowLen: number,
  opts: TrainOptions,
): ExtractorRun {
  const batch = opts.batch ?? DEFAULT_BATCH;
  const model = makeExtractor(family, windowLen, opts.seed);
  const untrained = model.clone();

  for (const s of trainSamples.concat(valSamples)) {
    if (s.labels.length !== model.outputDim) {
      throw new SchemaMismatch(
        `sample has ${s.labels.length} label channels, extractor expects ${model.outputDim}`,
      );
    }
  }

  const src = opts.input ?? "composite";
  const inputs = trainSamples.map((s) => extractorFeatures(s[src]));
  const targets = trainSamples.map((s) => s.labels);
  const valInputs = valSamples.map((s) => extractorFeatures(s[src]));
  const valTargets = valSamples.map((s) => s.labels);

  const untrainedValiLoss = meanMse(untrained, valInputs, valTargets);
  const dy = new Float64Array(model.outputDim);
  const order = new Int32Array(inputs.length);
  const trainLoss: number[] = [];
  const valiLoss: number[] = [];

  for (let epoch = 0; epoch < opts.epochs; epoch++) {
    const rng = new Rng(BigInt(opts.seed) * 1000003n + BigInt(epoch));
    for (let i = 0; i < order.length; i++) order[i] = i;
    rng.shuffle(order);
    trainLoss.push(sgdEpoch(model, inputs, targets, order, epochLr(opts, epoch), batch, dy));
    valiLoss.push(meanMse(model, valInputs, valTargets));
  }
  return { model, untrained, trainLoss, valiLoss, untrainedValiLoss };
}

/**
 * Samples whose detected spectral peaks line up one-to-one with the labeled
 * sines: as many peaks as label slots, each within tolBins DFT bins of its
 * sine. Training the rhythm read-off on this subset avoids pulling slot
 * weights toward the population mean on windows where sines merged into one
 * peak or sank below a neighbour's sidelobes.
 */
export function alignedRhythmSamples(
  samples: Sample[],
  windowLen: number,
  tolBins = 1,
): Sample[] {
  const fMin = 1 / windowLen;
  const slot0 = peakSlotStart(windowLen);
  const out: Sample[] = [];
  for (const s of samples) {
    const truth = decodeRhythm(s.labels, windowLen);
    const feats = extractorFeatures(s.rhythm);
    const peakFreqs: number[] = [];
    for (let j = 0; j < PEAK_SLOTS; j++) {
      const pos = feats[slot0 + 4 * j];
      if (pos < -0.5) break;
      peakFreqs.push(fMin + pos * (0.5 - fMin));
    }
    if (peakFreqs.length !== truth.sineCount) continue;
    let aligned = true;
    for (let j = 0; j < peakFreqs.length; j++) {
      if (Math.abs(peakFreqs[j] - truth.frequencies[j]) * windowLen > tolBins) {
        aligned = false;
        break;
      }
    }
    if (aligned) out.push(s);
  }
  return out;
}

export interface Decomposition {
  /** predicted label vector */
  labels: Float64Array;
  rhythm: RhythmEstimate;
  /** the rhythm the predicted labels describe, rendered mean-free */
  rendered: Float64Array;
}

/** Run a trained extractor on one window and rebuild the rhythm its
 * predicted labels describe. Decode failures propagate. */
export function extractAndDecompose(
  model: Model,
  window: Float64Array,
  windowLen: number,
): Decomposition {
  const labels = Float64Array.from(model.forward(extractorFeatures(window)));
  const rhythm = decodeRhythm(labels, windowLen);
  return { labels, rhythm, rendered: rerenderRhythm(rhythm, windowLen) };
}

function finishReport(base: Omit<RunReport, "minValiLoss" | "minValiLossEpoch">): RunReport {
  let minValiLoss: number | null = null;
  let minEpoch: number | null = null;
  base.valiLoss.forEach((v, i) => {
    if (minValiLoss === null || v < minValiLoss) {
      minValiLoss = v;
      minEpoch = i + 1;
    }
  });
  return { ...base, minValiLoss, minValiLossEpoch: minEpoch };
}

/** Autoencoding run on a fixed window set (modes real and sync). */
export function trainReconstructionFixed(
  mode: Mode,
  family: Family,
  windows: Float64Array[],
  valWindows: Float64Array[],
  windowLen: number,
  opts: TrainOptions,
): RunReport {
  const batch = opts.batch ?? DEFAULT_BATCH;
  const model = makeAutoencoder(family, windowLen, opts.seed);
  const dy = new Float64Array(model.outputDim);
  const order = new Int32Array(windows.length);
  const scaled = windows.map(scaleWindow);
  const valScaled = valWindows.map(scaleWindow);
  const trainLoss: number[] = [];
  const valiLoss: number[] = [];
  const epochHashes: string[] = [];

  for (let epoch = 0; epoch < opts.epochs; epoch++) {
    epochHashes.push(epochHash(windows));
    const rng = new Rng(BigInt(opts.seed) * 1000003n + BigInt(epoch));
    for (let i = 0; i < order.length; i++) order[i] = i;
    rng.shuffle(order);
    trainLoss.push(sgdEpoch(model, scaled, scaled, order, epochLr(opts, epoch), batch, dy));
    valiLoss.push(meanMse(model, valScaled, valScaled));
  }
  return finishReport({
    mode, model: family, epochs: opts.epochs, lr: opts.lr, seed: opts.seed,
    samplesPerEpoch: windows.length, trainLoss, valiLoss, epochHashes,
  });
}

/** Autoencoding against the live stream: fresh windows every epoch. */
export async function trainReconstructionStream(
  family: Family,
  source: StreamSource,
  valWindows: Float64Array[],
  opts: TrainOptions,
): Promise<RunReport> {
  const batch = opts.batch ?? DEFAULT_BATCH;
  const model = makeAutoencoder(family, source.windowLen, opts.seed);
  const dy = new Float64Array(model.outputDim);
  const trainLoss: number[] = [];
  const valiLoss: number[] = [];
  const epochHashes: string[] = [];

  const valScaled = valWindows.map(scaleWindow);
  await consumeStream(source, (epoch, composites) => {
    epochHashes.push(epochHash(composites));
    const scaled = composites.map(scaleWindow);
    const rng = new Rng(BigInt(opts.seed) * 1000003n + BigInt(epoch));
    const order = new Int32Array(scaled.length);
    for (let i = 0; i < order.length; i++) order[i] = i;
    rng.shuffle(order);
    trainLoss.push(sgdEpoch(model, scaled, scaled, order, epochLr(opts, epoch), batch, dy));
    valiLoss.push(meanMse(model, valScaled, valScaled));
  });

  return finishReport({
    mode: "unlimit", model: family, epochs: opts.epochs, lr: opts.lr,
    seed: opts.seed, samplesPerEpoch: source.epochSize,
    trainLoss, valiLoss, epochHashes,
  });
}
