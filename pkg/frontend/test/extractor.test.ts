import { describe, expect, it } from "vitest";

import { SchemaMismatch, readDataset } from "../src/data.js";
import { trainExtractor } from "../src/train.js";
import { datasetDir } from "./helpers.js";

const N = 64;

// the label regression setup held fixed across runs
const CONFIG = { epochs: 20, lr: 0.3, seed: 1, batch: 8, lrFinalFrac: 0.2 };

describe("label extraction", () => {
  it("halves the untrained validation loss on 10k samples", () => {
    const train = readDataset(datasetDir(101, 10000, N)).samples;
    const val = readDataset(datasetDir(202, 1000, N)).samples;

    const run = trainExtractor("linear", train, val, N, CONFIG);
    const final = run.valiLoss[run.valiLoss.length - 1];
    const ratio = final / run.untrainedValiLoss;
    // eslint-disable-next-line no-console
    console.log(
      `untrained ${run.untrainedValiLoss.toFixed(4)} ` +
      `final ${final.toFixed(4)} ratio ${ratio.toFixed(3)}`,
    );
    expect(run.untrainedValiLoss).toBeGreaterThan(0);
    expect(run.valiLoss).toHaveLength(CONFIG.epochs);
    expect(ratio).toBeLessThanOrEqual(0.5);
  });

  it("repeats exactly for equal seed and data", () => {
    const train = readDataset(datasetDir(31, 300, N)).samples;
    const val = readDataset(datasetDir(32, 60, N)).samples;
    const opts = { epochs: 3, lr: 0.3, seed: 5, batch: 8 };
    const a = trainExtractor("linear", train, val, N, opts);
    const b = trainExtractor("linear", train, val, N, opts);
    expect(a.trainLoss).toEqual(b.trainLoss);
    expect(a.valiLoss).toEqual(b.valiLoss);
  });

  it("returns empty traces for zero epochs", () => {
    const train = readDataset(datasetDir(31, 300, N)).samples;
    const run = trainExtractor("linear", train, [], N, {
      epochs: 0, lr: 0.3, seed: 1,
    });
    expect(run.trainLoss).toEqual([]);
    expect(run.valiLoss).toEqual([]);
  });

  it("aborts before training when the label schema disagrees", () => {
    const train = readDataset(datasetDir(31, 300, N)).samples;
    const doctored = train.map((s) => ({ ...s, labels: s.labels.subarray(0, 40) }));
    expect(() =>
      trainExtractor("linear", doctored, [], N, { epochs: 1, lr: 0.3, seed: 1 }),
    ).toThrow(SchemaMismatch);
  });
});
