/** Decode predicted label channels back to rhythm parameters and score the
 * re-rendered rhythm's spectrum (schema v1 channel layout).
 */

export const CH_SINE_COUNT = 0;
export const CH_FREQ = 1;
export const CH_AMP = 11;
export const CH_PHASE = 21;
export const CH_RATIOS = 40;
export const K_MAX = 10;
export const SENTINEL_CUTOFF = -0.5;

/** Raised when a label vector cannot be decoded (wrong channel count or
 * non-finite values where the decoder reads). */
export class DecodeError extends Error {}

const NUM_LABEL_CHANNELS = CH_RATIOS + 3;

function checkDecodable(labels: ArrayLike<number>, from: number, to: number): void {
  if (labels.length !== NUM_LABEL_CHANNELS) {
    throw new DecodeError(`label vector has ${labels.length} channels, expected ${NUM_LABEL_CHANNELS}`);
  }
  for (let i = from; i < to; i++) {
    if (!Number.isFinite(labels[i])) {
      throw new DecodeError(`non-finite value in label channel ${i}`);
    }
  }
}

export interface RhythmEstimate {
  sineCount: number;
  frequencies: number[];
  amplitudes: number[];
  phases: number[];
}

const clamp01 = (v: number) => Math.min(Math.max(v, 0), 1);

/**
 * Rhythm part of a predicted (or exact) label vector. Slot values below the
 * sentinel cutoff end the slot list early, whatever the count channel says.
 */
export function decodeRhythm(
  labels: ArrayLike<number>,
  windowLen: number,
  kMin = 3,
  kMax = 10,
): RhythmEstimate {
  checkDecodable(labels, 0, CH_PHASE + K_MAX);
  const fMin = 1 / windowLen;
  const fMax = 0.5;
  let k = Math.round(clamp01(labels[CH_SINE_COUNT]) * (kMax - kMin)) + kMin;
  k = Math.min(Math.max(k, 1), K_MAX);
  const frequencies: number[] = [];
  const amplitudes: number[] = [];
  const phases: number[] = [];
  for (let j = 0; j < k; j++) {
    const f = labels[CH_FREQ + j];
    const a = labels[CH_AMP + j];
    if (f < SENTINEL_CUTOFF || a < SENTINEL_CUTOFF) break;
    frequencies.push(fMin + clamp01(f) * (fMax - fMin));
    amplitudes.push(clamp01(a));
    phases.push(clamp01(labels[CH_PHASE + j]) * 2 * Math.PI);
  }
  return { sineCount: frequencies.length, frequencies, amplitudes, phases };
}

export function decodeRatios(labels: ArrayLike<number>): number[] {
  checkDecodable(labels, CH_RATIOS, CH_RATIOS + 3);
  return [
    labels[CH_RATIOS],
    labels[CH_RATIOS + 1],
    labels[CH_RATIOS + 2],
  ].map(clamp01);
}

/** Per-channel medians of a C x N prediction matrix (row-major). */
export function channelMedians(matrix: Float64Array, channels: number, n: number): Float64Array {
  const out = new Float64Array(channels);
  const row = new Float64Array(n);
  for (let c = 0; c < channels; c++) {
    row.set(matrix.subarray(c * n, (c + 1) * n));
    row.sort();
    out[c] = n % 2 ? row[(n - 1) / 2] : (row[n / 2 - 1] + row[n / 2]) / 2;
  }
  return out;
}

/**
 * Superpose the decoded sines. Mean-removed, so the spectrum comparison
 * sees only the oscillatory content, not an offset at the zero bin.
 */
export function rerenderRhythm(est: RhythmEstimate, n: number): Float64Array {
  const y = new Float64Array(n);
  for (let j = 0; j < est.sineCount; j++) {
    const w = 2 * Math.PI * est.frequencies[j];
    for (let t = 0; t < n; t++) {
      y[t] += est.amplitudes[j] * Math.sin(w * t + est.phases[j]);
    }
  }
  let mean = 0;
  for (let t = 0; t < n; t++) mean += y[t];
  mean /= n;
  for (let t = 0; t < n; t++) y[t] -= mean;
  return y;
}

/** One-sided DFT magnitudes, bins 0..n/2. */
export function dftMagnitude(x: ArrayLike<number>): Float64Array {
  const n = x.length;
  const bins = Math.floor(n / 2) + 1;
  const out = new Float64Array(bins);
  for (let k = 0; k < bins; k++) {
    let re = 0;
    let im = 0;
    const w = (-2 * Math.PI * k) / n;
    for (let t = 0; t < n; t++) {
      re += x[t] * Math.cos(w * t);
      im += x[t] * Math.sin(w * t);
    }
    out[k] = Math.hypot(re, im);
  }
  return out;
}

/**
 * Fraction of spectral energy (squared magnitude, zero bin excluded) that
 * falls inside the true frequency bins widened by +-1.
 */
export function energyFraction(
  mags: Float64Array,
  trueFrequencies: ArrayLike<number>,
  n: number,
): number {
  const top = Math.floor(n / 2);
  const allowed = new Uint8Array(top + 1);
  for (let j = 0; j < trueFrequencies.length; j++) {
    const bin = Math.round(trueFrequencies[j] * n);
    for (let b = bin - 1; b <= bin + 1; b++) {
      if (b >= 1 && b <= top) allowed[b] = 1;
    }
  }
  let inside = 0;
  let total = 0;
  for (let b = 1; b <= top; b++) {
    const e = mags[b] * mags[b];
    total += e;
    if (allowed[b]) inside += e;
  }
  return total > 0 ? inside / total : 1;
}

export const PEAK_SLOTS = 10;
const COUNT_LADDER = [0.02, 0.05, 0.1, 0.15, 0.2, 0.3, 0.4, 0.5];
const NUM_BANDS = 8;
const NUM_MOMENTS = 9;

export function featureDim(windowLen: number): number {
  const bins = Math.floor(windowLen / 2) + 1;
  return (
    windowLen + bins + 5 * PEAK_SLOTS + COUNT_LADDER.length + 2 +
    NUM_BANDS + NUM_MOMENTS
  );
}

/** Offset of the first peak slot in a feature vector; slots are 4 wide
 * (position, magnitude, cos, sin) with -1 filling unused slots. */
export function peakSlotStart(windowLen: number): number {
  return windowLen + Math.floor(windowLen / 2) + 1;
}

function momentFeatures(x: Float64Array, out: Float64Array, at: number): void {
  const n = x.length;
  let mean = 0;
  for (let t = 0; t < n; t++) mean += x[t];
  mean /= n;
  let m2 = 0;
  let m3 = 0;
  let m4 = 0;
  for (let t = 0; t < n; t++) {
    const d = x[t] - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  const sd = Math.sqrt(m2);
  const skew = sd > 0 ? m3 / (sd * sd * sd) : 0;
  const kurt = m2 > 0 ? m4 / (m2 * m2) - 3 : 0;
  let ac = 0;
  for (let t = 1; t < n; t++) ac += (x[t] - mean) * (x[t - 1] - mean);
  ac = m2 > 0 ? ac / ((n - 1) * m2) : 0;
  out[at] = mean;
  out[at + 1] = sd;
  out[at + 2] = Math.tanh(skew / 2);
  out[at + 3] = Math.tanh(kurt / 5);
  out[at + 4] = ac;
}

/**
 * Window features for label extraction: the raw window, scaled one-sided
 * DFT magnitudes, the top spectral peaks as (position, magnitude, phase
 * cosine, phase sine) slots in ascending bin order with sentinel fill,
 * the peak magnitudes again in descending order, peak counts above a
 * ladder of relative thresholds, two energy concentration summaries,
 * band energy fractions, and distribution shape moments. The counting
 * features tell the sine count apart; the slot features carry where the
 * energy sits and how it is aligned.
 */
export function extractorFeatures(window: Float64Array): Float64Array {
  const n = window.length;
  const bins = Math.floor(n / 2) + 1;
  const re = new Float64Array(bins);
  const im = new Float64Array(bins);
  const mags = new Float64Array(bins);
  for (let k = 0; k < bins; k++) {
    let cr = 0;
    let ci = 0;
    const w = (-2 * Math.PI * k) / n;
    for (let t = 0; t < n; t++) {
      cr += window[t] * Math.cos(w * t);
      ci += window[t] * Math.sin(w * t);
    }
    re[k] = cr;
    im[k] = ci;
    mags[k] = Math.hypot(cr, ci);
  }
  const out = new Float64Array(featureDim(n));
  out.set(window);
  for (let k = 0; k < bins; k++) out[n + k] = (2 * mags[k]) / n;

  const peaks: number[] = [];
  let maxMag = 0;
  for (let b = 1; b < bins; b++) {
    if (mags[b] > maxMag) maxMag = mags[b];
    const left = b >= 2 ? mags[b - 1] : -Infinity;
    const right = b + 1 < bins ? mags[b + 1] : -Infinity;
    if (mags[b] > left && mags[b] >= right) peaks.push(b);
  }
  peaks.sort((x, y) => mags[y] - mags[x]);
  const kept = peaks.slice(0, PEAK_SLOTS);
  const byBin = kept.slice().sort((x, y) => x - y);

  const fMin = 1 / n;
  let at = n + bins;
  out.fill(-1, at, at + 4 * PEAK_SLOTS);
  for (let j = 0; j < byBin.length; j++) {
    const b = byBin[j];
    out[at + 4 * j] = (b / n - fMin) / (0.5 - fMin);
    out[at + 4 * j + 1] = (2 * mags[b]) / n;
    out[at + 4 * j + 2] = mags[b] > 0 ? re[b] / mags[b] : 0;
    out[at + 4 * j + 3] = mags[b] > 0 ? im[b] / mags[b] : 0;
  }
  at += 4 * PEAK_SLOTS;
  for (let j = 0; j < PEAK_SLOTS; j++) {
    out[at + j] = j < kept.length ? (2 * mags[kept[j]]) / n : 0;
  }
  at += PEAK_SLOTS;
  for (let i = 0; i < COUNT_LADDER.length; i++) {
    let count = 0;
    for (const b of peaks) if (mags[b] >= COUNT_LADDER[i] * maxMag) count++;
    out[at + i] = count / PEAK_SLOTS;
  }
  at += COUNT_LADDER.length;
  let e1 = 0;
  let e2 = 0;
  for (let b = 1; b < bins; b++) {
    const e = mags[b] * mags[b];
    e1 += e;
    e2 += e * e;
  }
  // participation ratio: effective number of active bins
  out[at] = e2 > 0 ? e1 * e1 / e2 / PEAK_SLOTS : 0;
  let top3 = 0;
  for (let j = 0; j < Math.min(3, kept.length); j++) {
    top3 += mags[kept[j]] * mags[kept[j]];
  }
  out[at + 1] = e1 > 0 ? top3 / e1 : 0;
  at += 2;

  // octave-ish band energy fractions over the non-zero bins
  const edges = [1, 3, 5, 8, 12, 17, 23, 28, bins];
  for (let i = 0; i < NUM_BANDS; i++) {
    let e = 0;
    for (let b = edges[i]; b < edges[i + 1] && b < bins; b++) e += mags[b] * mags[b];
    out[at + i] = e1 > 0 ? e / e1 : 0;
  }
  at += NUM_BANDS;

  // distribution shape of the window and of its first difference; the
  // diff mean is just the endpoint gap over n, so it is dropped
  momentFeatures(window, out, at);
  const diff = new Float64Array(n - 1);
  for (let t = 1; t < n; t++) diff[t - 1] = window[t] - window[t - 1];
  const dm = new Float64Array(5);
  momentFeatures(diff, dm, 0);
  out[at + 5] = dm[1];
  out[at + 6] = dm[2];
  out[at + 7] = dm[3];
  out[at + 8] = dm[4];
  return out;
}
