/** Deterministic PRNG so every training run is exactly repeatable.
 *
 * splitmix64 over BigInt for the state walk, mapped to doubles in [0, 1).
 * Slow compared to a native generator but only used for weight init and
 * epoch shuffles, never in inner loops.
 */

const MASK = (1n << 64n) - 1n;
const GAMMA = 0x9e3779b97f4a7c15n;

export class Rng {
  private state: bigint;

  constructor(seed: number | bigint) {
    this.state = BigInt(seed) & MASK;
  }

  nextU64(): bigint {
    this.state = (this.state + GAMMA) & MASK;
    let z = this.state;
    z = ((z ^ (z >> 30n)) * 0xbf58476d1ce4e5b9n) & MASK;
    z = ((z ^ (z >> 27n)) * 0x94d049bb133111ebn) & MASK;
    return z ^ (z >> 31n);
  }

  /** uniform in [0, 1), 53-bit resolution */
  next(): number {
    return Number(this.nextU64() >> 11n) / 9007199254740992;
  }

  uniform(lo: number, hi: number): number {
    return lo + (hi - lo) * this.next();
  }

  /** standard normal via Box-Muller; one value per call, no caching */
  gauss(): number {
    const u = Math.max(this.next(), 1e-12);
    const v = this.next();
    return Math.sqrt(-2 * Math.log(u)) * Math.cos(2 * Math.PI * v);
  }

  int(n: number): number {
    return Math.floor(this.next() * n);
  }

  shuffle(idx: Int32Array): void {
    for (let i = idx.length - 1; i > 0; i--) {
      const j = this.int(i + 1);
      const t = idx[i];
      idx[i] = idx[j];
      idx[j] = t;
    }
  }
}

/** scaled uniform init, the usual +-sqrt(1/fanIn) band */
export function initWeights(rng: Rng, size: number, fanIn: number): Float64Array {
  const w = new Float64Array(size);
  const bound = Math.sqrt(1 / fanIn);
  for (let i = 0; i < size; i++) w[i] = rng.uniform(-bound, bound);
  return w;
}
