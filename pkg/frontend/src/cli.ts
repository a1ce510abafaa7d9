#!/usr/bin/env node
/** train CLI: autoencoding runs under the real / sync / unlimit protocols.
 *
 * Exit codes follow the generator's convention: 1 bad arguments, 2 engine,
 * stream, or filesystem failure, 3 unparseable or mismatched data.
 */

import * as fs from "node:fs";
import { parseArgs } from "node:util";

import { ParseFailure, SchemaMismatch, readDataset, readWindowsCsv } from "./data.js";
import { EngineFailure, StreamFailure } from "./engine.js";
import { Family } from "./models.js";
import {
  Mode,
  RunReport,
  trainReconstructionFixed,
  trainReconstructionStream,
} from "./train.js";

const USAGE = `usage: tsynth-train train --mode {real,sync,unlimit} --model {rnn,linear,patch}
                    [--epochs E] [--lr LR] [--seed S]
                    (--data DIR_OR_CSV | --stream SEED,EPOCH_SIZE[,WINDOW_LEN])
                    --val WINDOWS_CSV --report OUT_JSON`;

class BadArgs extends Error {}

// reconstruction defaults; each family plateaus within 20 epochs at these
const FAMILY_LR: Record<Family, number> = { linear: 2.0, patch: 1.0, rnn: 0.03 };

function parse(argv: string[]) {
  const { values, positionals } = parseArgs({
    args: argv,
    allowPositionals: true,
    options: {
      mode: { type: "string" },
      model: { type: "string" },
      epochs: { type: "string", default: "20" },
      lr: { type: "string" },
      seed: { type: "string", default: "1" },
      data: { type: "string" },
      stream: { type: "string" },
      val: { type: "string" },
      report: { type: "string" },
    },
  });
  if (positionals.length !== 1 || positionals[0] !== "train") {
    throw new BadArgs(USAGE);
  }
  const mode = values.mode as Mode | undefined;
  if (!mode || !["real", "sync", "unlimit"].includes(mode)) {
    throw new BadArgs("--mode must be real, sync, or unlimit");
  }
  const model = values.model as Family | undefined;
  if (!model || !["rnn", "linear", "patch"].includes(model)) {
    throw new BadArgs("--model must be rnn, linear, or patch");
  }
  const epochs = Number(values.epochs);
  if (!Number.isInteger(epochs) || epochs < 0) {
    throw new BadArgs("--epochs must be a non-negative integer");
  }
  const lr = values.lr === undefined ? FAMILY_LR[model] : Number(values.lr);
  if (!(lr > 0)) throw new BadArgs("--lr must be positive");
  const seed = Number(values.seed);
  if (!Number.isInteger(seed)) throw new BadArgs("--seed must be an integer");
  if (!values.val) throw new BadArgs("--val is required");
  if (!values.report) throw new BadArgs("--report is required");
  if (mode === "unlimit") {
    if (!values.stream) throw new BadArgs("unlimit mode needs --stream SEED,EPOCH_SIZE");
    if (values.data) throw new BadArgs("--data and --stream are exclusive");
  } else {
    if (!values.data) throw new BadArgs(`${mode} mode needs --data`);
    if (values.stream) throw new BadArgs("--data and --stream are exclusive");
  }
  return { mode, model, epochs, lr, seed, data: values.data, stream: values.stream,
           val: values.val, report: values.report };
}

async function main(argv: string[]): Promise<number> {
  let args;
  try {
    args = parse(argv);
  } catch (err) {
    if (err instanceof BadArgs || (err as { code?: string }).code?.startsWith("ERR_PARSE_ARGS")) {
      console.error(String((err as Error).message));
      console.error(USAGE);
      return 1;
    }
    throw err;
  }

  try {
    const valWindows = readWindowsCsv(args.val);
    const windowLen = valWindows[0]?.length;
    if (!windowLen) throw new ParseFailure("validation set is empty");
    const opts = { epochs: args.epochs, lr: args.lr, seed: args.seed };

    let report: RunReport;
    if (args.mode === "unlimit") {
      const parts = args.stream!.split(",").map(Number);
      if (parts.length < 2 || parts.some((v) => !Number.isFinite(v))) {
        console.error("--stream must be SEED,EPOCH_SIZE[,WINDOW_LEN]");
        return 1;
      }
      const n = parts.length > 2 ? parts[2] : windowLen;
      report = await trainReconstructionStream(
        args.model,
        { seed: parts[0], epochSize: parts[1], windowLen: n, epochs: args.epochs },
        valWindows,
        opts,
      );
    } else if (args.mode === "sync") {
      const { manifest, samples } = readDataset(args.data!);
      if (manifest.window_len !== windowLen) {
        throw new SchemaMismatch(
          `dataset N=${manifest.window_len}, validation N=${windowLen}`,
        );
      }
      const windows = samples.map((s) => s.composite);
      report = trainReconstructionFixed("sync", args.model, windows, valWindows, windowLen, opts);
    } else {
      const windows = readWindowsCsv(args.data!);
      if (windows[0]?.length !== windowLen) {
        throw new SchemaMismatch("training and validation window lengths differ");
      }
      report = trainReconstructionFixed("real", args.model, windows, valWindows, windowLen, opts);
    }

    fs.writeFileSync(args.report, JSON.stringify(report, null, 2) + "\n");
    const min = report.minValiLoss === null
      ? "no epochs"
      : `minValiLoss ${report.minValiLoss.toExponential(3)} @ epoch ${report.minValiLossEpoch}`;
    console.log(`${args.mode}/${args.model}: ${report.epochs} epochs, ${min}`);
    return 0;
  } catch (err) {
    if (err instanceof EngineFailure || err instanceof StreamFailure) {
      console.error(`error: ${(err as Error).message}`);
      return 2;
    }
    if (err instanceof SchemaMismatch || err instanceof ParseFailure) {
      console.error(`error: ${(err as Error).message}`);
      return 3;
    }
    if ((err as NodeJS.ErrnoException).code === "ENOENT") {
      console.error(`error: ${(err as Error).message}`);
      return 2;
    }
    throw err;
  }
}

main(process.argv.slice(2)).then(
  (code) => process.exit(code),
  (err) => {
    console.error(err);
    process.exit(2);
  },
);
