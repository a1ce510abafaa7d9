/** Three small model families, hand-rolled on typed arrays.
 *
 * Every family exists in two shapes: a label extractor (window features in,
 * one value per label channel out) and a bottleneck autoencoder (window in,
 * window out). Gradients are written out explicitly; SGD only. All weights
 * come from a seeded generator, so runs repeat exactly.
 *
 * Extractor inputs are the raw window, its scaled DFT magnitudes, and the
 * spectral peak slots; each family decides which parts it consumes.
 */

import { featureDim } from "./labels.js";
import { Rng, initWeights } from "./rng.js";

export type Family = "linear" | "patch" | "rnn";

export interface Model {
  readonly family: Family;
  readonly inputDim: number;
  readonly outputDim: number;
  forward(x: Float64Array): Float64Array;
  /** accumulate gradients for the most recent forward */
  backward(dy: Float64Array): void;
  /** apply accumulated gradients (averaged over batch) and clear them */
  step(lr: number, batch: number): void;
  clone(): Model;
  params(): { value: Float64Array; grad: Float64Array }[];
}

// y[0..out) += W(out x in) x
function matvec(
  y: Float64Array, W: Float64Array, x: Float64Array, out: number, inn: number,
): void {
  for (let i = 0; i < out; i++) {
    let s = 0;
    const row = i * inn;
    for (let j = 0; j < inn; j++) s += W[row + j] * x[j];
    y[i] += s;
  }
}

// dW += dy (outer) x ; dx += W^T dy  (dx may be null)
function matvecGrad(
  dW: Float64Array, W: Float64Array, dy: Float64Array, x: Float64Array,
  dx: Float64Array | null, out: number, inn: number,
): void {
  for (let i = 0; i < out; i++) {
    const row = i * inn;
    const g = dy[i];
    for (let j = 0; j < inn; j++) {
      dW[row + j] += g * x[j];
      if (dx) dx[j] += W[row + j] * g;
    }
  }
}

function sgd(p: { value: Float64Array; grad: Float64Array }[], lr: number, batch: number): void {
  const scale = lr / batch;
  for (const { value, grad } of p) {
    for (let i = 0; i < value.length; i++) {
      value[i] -= scale * grad[i];
      grad[i] = 0;
    }
  }
}

/** centered moving average with replicated edges */
function movingAverage(x: Float64Array, n: number, width: number, out: Float64Array): void {
  const half = (width - 1) / 2;
  for (let t = 0; t < n; t++) {
    let s = 0;
    for (let u = t - half; u <= t + half; u++) {
      s += x[Math.min(Math.max(u, 0), n - 1)];
    }
    out[t] = s / width;
  }
}

const MA_WIDTH = 17;

/* ------------------------------------------------------------------ */
/* linear family: decomposition into slow + residual parts, linear heads */

export class LinearModel implements Model {
  readonly family: Family = "linear";
  private readonly n: number;
  private readonly featDim: number;
  private W: Float64Array;
  private b: Float64Array;
  private dW: Float64Array;
  private db: Float64Array;
  private feat: Float64Array;
  private y: Float64Array;

  constructor(
    readonly inputDim: number,
    readonly outputDim: number,
    private readonly windowLen: number,
    seed: number,
    weights?: { W: Float64Array; b: Float64Array },
  ) {
    this.n = windowLen;
    const extras = inputDim - this.n; // spectrum block, if present
    this.featDim = 2 * this.n + extras;
    if (weights) {
      this.W = weights.W.slice();
      this.b = weights.b.slice();
    } else {
      const rng = new Rng(seed);
      this.W = initWeights(rng, outputDim * this.featDim, this.featDim);
      this.b = new Float64Array(outputDim);
    }
    this.dW = new Float64Array(this.W.length);
    this.db = new Float64Array(outputDim);
    this.feat = new Float64Array(this.featDim);
    this.y = new Float64Array(outputDim);
  }

  forward(x: Float64Array): Float64Array {
    const n = this.n;
    movingAverage(x, n, MA_WIDTH, this.feat); // slow part in feat[0..n)
    for (let t = 0; t < n; t++) this.feat[n + t] = x[t] - this.feat[t];
    for (let j = 2 * n; j < this.featDim; j++) this.feat[j] = x[n + (j - 2 * n)];
    this.y.set(this.b);
    matvec(this.y, this.W, this.feat, this.outputDim, this.featDim);
    return this.y;
  }

  backward(dy: Float64Array): void {
    matvecGrad(this.dW, this.W, dy, this.feat, null, this.outputDim, this.featDim);
    for (let i = 0; i < this.outputDim; i++) this.db[i] += dy[i];
  }

  step(lr: number, batch: number): void {
    sgd(this.params(), lr, batch);
  }

  params() {
    return [
      { value: this.W, grad: this.dW },
      { value: this.b, grad: this.db },
    ];
  }

  clone(): Model {
    return new LinearModel(this.inputDim, this.outputDim, this.windowLen, 0, {
      W: this.W,
      b: this.b,
    });
  }
}

/** purely linear two-branch autoencoder: each part through its own rank-r map */
export class LinearAutoencoder implements Model {
  readonly family: Family = "linear";
  private readonly n: number;
  private readonly r: number;
  private p: { value: Float64Array; grad: Float64Array }[];
  private slow: Float64Array;
  private resid: Float64Array;
  private zs: Float64Array;
  private zr: Float64Array;
  private y: Float64Array;

  constructor(
    readonly inputDim: number,
    seed: number,
    rank = 8,
    weights?: Float64Array[],
  ) {
    this.n = inputDim;
    this.r = rank;
    const sizes = [rank * this.n, this.n * rank, rank * this.n, this.n * rank, this.n];
    const fans = [this.n, rank, this.n, rank, 1];
    if (weights) {
      this.p = weights.map((w) => ({ value: w.slice(), grad: new Float64Array(w.length) }));
    } else {
      const rng = new Rng(seed);
      this.p = sizes.map((s, i) => ({
        value: i === 4 ? new Float64Array(s) : initWeights(rng, s, fans[i]),
        grad: new Float64Array(s),
      }));
    }
    this.slow = new Float64Array(this.n);
    this.resid = new Float64Array(this.n);
    this.zs = new Float64Array(rank);
    this.zr = new Float64Array(rank);
    this.y = new Float64Array(this.n);
  }

  get outputDim(): number {
    return this.n;
  }

  forward(x: Float64Array): Float64Array {
    const [As, Bs, Ar, Br, b] = this.p.map((q) => q.value);
    movingAverage(x, this.n, MA_WIDTH, this.slow);
    for (let t = 0; t < this.n; t++) this.resid[t] = x[t] - this.slow[t];
    this.zs.fill(0);
    this.zr.fill(0);
    matvec(this.zs, As, this.slow, this.r, this.n);
    matvec(this.zr, Ar, this.resid, this.r, this.n);
    this.y.set(b);
    matvec(this.y, Bs, this.zs, this.n, this.r);
    matvec(this.y, Br, this.zr, this.n, this.r);
    return this.y;
  }

  backward(dy: Float64Array): void {
    const [As, Bs, Ar, Br] = this.p.map((q) => q.value);
    const [dAs, dBs, dAr, dBr, db] = this.p.map((q) => q.grad);
    const dzs = new Float64Array(this.r);
    const dzr = new Float64Array(this.r);
    matvecGrad(dBs, Bs, dy, this.zs, dzs, this.n, this.r);
    matvecGrad(dBr, Br, dy, this.zr, dzr, this.n, this.r);
    matvecGrad(dAs, As, dzs, this.slow, null, this.r, this.n);
    matvecGrad(dAr, Ar, dzr, this.resid, null, this.r, this.n);
    for (let t = 0; t < this.n; t++) db[t] += dy[t];
  }

  step(lr: number, batch: number): void {
    sgd(this.p, lr, batch);
  }

  params() {
    return this.p;
  }

  clone(): Model {
    return new LinearAutoencoder(this.n, 0, this.r, this.p.map((q) => q.value));
  }
}

/* ------------------------------------------------------------------ */
/* patch family: shared per-patch embedding, tanh mixing layer, linear out */

export class PatchModel implements Model {
  readonly family: Family = "patch";
  private readonly n: number;
  private readonly patch: number;
  private readonly nPatches: number;
  private readonly embDim: number;
  private readonly mixDim: number;
  private readonly mixIn: number;
  private p: { value: Float64Array; grad: Float64Array }[];
  private emb: Float64Array;
  private mixInBuf: Float64Array;
  private z: Float64Array;
  private y: Float64Array;
  private x: Float64Array | null = null;

  constructor(
    readonly inputDim: number,
    readonly outputDim: number,
    private readonly windowLen: number,
    seed: number,
    dims: { patch?: number; embDim?: number; mixDim?: number } = {},
    weights?: Float64Array[],
  ) {
    this.n = windowLen;
    this.patch = dims.patch ?? 8;
    this.embDim = dims.embDim ?? 8;
    this.mixDim = dims.mixDim ?? 48;
    this.nPatches = Math.floor(this.n / this.patch);
    const spectrumDim = inputDim - this.n;
    this.mixIn = this.nPatches * this.embDim + spectrumDim;
    const sizes = [
      this.embDim * this.patch, this.embDim,
      this.mixDim * this.mixIn, this.mixDim,
      outputDim * this.mixDim, outputDim,
    ];
    const fans = [this.patch, 1, this.mixIn, 1, this.mixDim, 1];
    if (weights) {
      this.p = weights.map((w) => ({ value: w.slice(), grad: new Float64Array(w.length) }));
    } else {
      const rng = new Rng(seed);
      this.p = sizes.map((s, i) => ({
        value: i % 2 ? new Float64Array(s) : initWeights(rng, s, fans[i]),
        grad: new Float64Array(s),
      }));
    }
    this.emb = new Float64Array(this.nPatches * this.embDim);
    this.mixInBuf = new Float64Array(this.mixIn);
    this.z = new Float64Array(this.mixDim);
    this.y = new Float64Array(outputDim);
  }

  forward(x: Float64Array): Float64Array {
    const [We, be, Wz, bz, Wo, bo] = this.p.map((q) => q.value);
    this.x = x;
    for (let pi = 0; pi < this.nPatches; pi++) {
      for (let e = 0; e < this.embDim; e++) {
        let s = be[e];
        const row = e * this.patch;
        const off = pi * this.patch;
        for (let j = 0; j < this.patch; j++) s += We[row + j] * x[off + j];
        this.emb[pi * this.embDim + e] = Math.tanh(s);
      }
    }
    this.mixInBuf.set(this.emb);
    for (let j = this.emb.length; j < this.mixIn; j++) {
      this.mixInBuf[j] = x[this.n + (j - this.emb.length)];
    }
    for (let i = 0; i < this.mixDim; i++) this.z[i] = bz[i];
    matvec(this.z, Wz, this.mixInBuf, this.mixDim, this.mixIn);
    for (let i = 0; i < this.mixDim; i++) this.z[i] = Math.tanh(this.z[i]);
    this.y.set(bo);
    matvec(this.y, Wo, this.z, this.outputDim, this.mixDim);
    return this.y;
  }

  backward(dy: Float64Array): void {
    const [We, , Wz, , Wo] = this.p.map((q) => q.value);
    const [dWe, dbe, dWz, dbz, dWo, dbo] = this.p.map((q) => q.grad);
    const x = this.x!;
    const dz = new Float64Array(this.mixDim);
    matvecGrad(dWo, Wo, dy, this.z, dz, this.outputDim, this.mixDim);
    for (let i = 0; i < this.outputDim; i++) dbo[i] += dy[i];
    for (let i = 0; i < this.mixDim; i++) dz[i] *= 1 - this.z[i] * this.z[i];
    const dmixIn = new Float64Array(this.mixIn);
    matvecGrad(dWz, Wz, dz, this.mixInBuf, dmixIn, this.mixDim, this.mixIn);
    for (let i = 0; i < this.mixDim; i++) dbz[i] += dz[i];
    for (let pi = 0; pi < this.nPatches; pi++) {
      const off = pi * this.patch;
      for (let e = 0; e < this.embDim; e++) {
        const a = this.emb[pi * this.embDim + e];
        const g = dmixIn[pi * this.embDim + e] * (1 - a * a);
        dbe[e] += g;
        const row = e * this.patch;
        for (let j = 0; j < this.patch; j++) dWe[row + j] += g * x[off + j];
      }
    }
  }

  step(lr: number, batch: number): void {
    sgd(this.p, lr, batch);
  }

  params() {
    return this.p;
  }

  clone(): Model {
    return new PatchModel(
      this.inputDim, this.outputDim, this.windowLen, 0,
      { patch: this.patch, embDim: this.embDim, mixDim: this.mixDim },
      this.p.map((q) => q.value),
    );
  }
}

/* ------------------------------------------------------------------ */
/* recurrent family: scalar-input Elman scan, linear head on final state */

export class RnnModel implements Model {
  readonly family: Family = "rnn";
  private readonly n: number;
  private readonly hidden: number;
  private readonly headIn: number;
  private p: { value: Float64Array; grad: Float64Array }[];
  private states: Float64Array; // h for every step, n x hidden
  private headBuf: Float64Array;
  private y: Float64Array;
  private x: Float64Array | null = null;

  constructor(
    readonly inputDim: number,
    readonly outputDim: number,
    private readonly windowLen: number,
    seed: number,
    hidden: number,
    weights?: Float64Array[],
  ) {
    this.n = windowLen;
    this.hidden = hidden;
    const spectrumDim = inputDim - this.n;
    this.headIn = hidden + spectrumDim;
    const sizes = [hidden, hidden * hidden, hidden, outputDim * this.headIn, outputDim];
    const fans = [1, hidden, 1, this.headIn, 1];
    if (weights) {
      this.p = weights.map((w) => ({ value: w.slice(), grad: new Float64Array(w.length) }));
    } else {
      const rng = new Rng(seed);
      this.p = sizes.map((s, i) => ({
        value: i === 2 || i === 4
          ? new Float64Array(s)
          : initWeights(rng, s, fans[i]),
        grad: new Float64Array(s),
      }));
    }
    this.states = new Float64Array(this.n * hidden);
    this.headBuf = new Float64Array(this.headIn);
    this.y = new Float64Array(outputDim);
  }

  forward(x: Float64Array): Float64Array {
    const [wx, Wh, bh, Wo, bo] = this.p.map((q) => q.value);
    const H = this.hidden;
    this.x = x;
    for (let t = 0; t < this.n; t++) {
      const prev = t > 0 ? this.states.subarray((t - 1) * H, t * H) : null;
      for (let i = 0; i < H; i++) {
        let s = bh[i] + wx[i] * x[t];
        if (prev) {
          const row = i * H;
          for (let j = 0; j < H; j++) s += Wh[row + j] * prev[j];
        }
        this.states[t * H + i] = Math.tanh(s);
      }
    }
    this.headBuf.set(this.states.subarray((this.n - 1) * H, this.n * H));
    for (let j = H; j < this.headIn; j++) this.headBuf[j] = x[this.n + (j - H)];
    this.y.set(bo);
    matvec(this.y, Wo, this.headBuf, this.outputDim, this.headIn);
    return this.y;
  }

  backward(dy: Float64Array): void {
    const [, Wh, , Wo] = this.p.map((q) => q.value);
    const [dwx, dWh, dbh, dWo, dbo] = this.p.map((q) => q.grad);
    const H = this.hidden;
    const x = this.x!;
    const dHead = new Float64Array(this.headIn);
    matvecGrad(dWo, Wo, dy, this.headBuf, dHead, this.outputDim, this.headIn);
    for (let i = 0; i < this.outputDim; i++) dbo[i] += dy[i];

    const dh = new Float64Array(H);
    dh.set(dHead.subarray(0, H));
    const dpre = new Float64Array(H);
    for (let t = this.n - 1; t >= 0; t--) {
      const h = this.states.subarray(t * H, (t + 1) * H);
      for (let i = 0; i < H; i++) dpre[i] = dh[i] * (1 - h[i] * h[i]);
      const prev = t > 0 ? this.states.subarray((t - 1) * H, t * H) : null;
      dh.fill(0);
      for (let i = 0; i < H; i++) {
        const g = dpre[i];
        dwx[i] += g * x[t];
        dbh[i] += g;
        if (prev) {
          const row = i * H;
          for (let j = 0; j < H; j++) {
            dWh[row + j] += g * prev[j];
            dh[j] += Wh[row + j] * g;
          }
        }
      }
    }
  }

  step(lr: number, batch: number): void {
    sgd(this.p, lr, batch);
  }

  params() {
    return this.p;
  }

  clone(): Model {
    return new RnnModel(
      this.inputDim, this.outputDim, this.windowLen, 0, this.hidden,
      this.p.map((q) => q.value),
    );
  }
}

/* ------------------------------------------------------------------ */

export const NUM_LABELS = 43;

/** extractor: window + spectrum + peak features in, one value per channel out */
export function makeExtractor(family: Family, windowLen: number, seed: number): Model {
  const inputDim = featureDim(windowLen);
  switch (family) {
    case "linear":
      return new LinearModel(inputDim, NUM_LABELS, windowLen, seed);
    case "patch":
      return new PatchModel(inputDim, NUM_LABELS, windowLen, seed, {
        patch: 8, embDim: 8, mixDim: 96,
      });
    case "rnn":
      return new RnnModel(inputDim, NUM_LABELS, windowLen, seed, 24);
  }
}

/** bottleneck autoencoder on the raw window */
export function makeAutoencoder(family: Family, windowLen: number, seed: number): Model {
  switch (family) {
    case "linear":
      return new LinearAutoencoder(windowLen, seed);
    case "patch":
      return new PatchModel(windowLen, windowLen, windowLen, seed, {
        patch: 8, embDim: 6, mixDim: 12,
      });
    case "rnn":
      return new RnnModel(windowLen, windowLen, windowLen, seed, 16);
  }
}
