/**
 * Standalone figure generator for capflow outputs.
 *
 * Usage:
 *   node dist/cli.js --kind monotonicity  --in out/trajectory.csv --out v.svg
 *   node dist/cli.js --kind monitors      --in out/trajectory.csv --out m.svg
 *   node dist/cli.js --kind profiles      --in 'out/snapshots/*.txt' --out p.svg [--xi 0]
 *   node dist/cli.js --kind sweep-summary --in out/sweep_summary.csv --out s.svg
 *
 * Multiple inputs may be comma-separated; profiles sorts snapshot files by
 * name (the run writes them in time order). The output file is written
 * only after the figure builds, so schema failures leave nothing behind.
 */

import { readFileSync, writeFileSync } from "fs";
import { basename } from "path";

import { FigureKind, monitorsFigure, monotonicityFigure, profilesFigure, sweepSummaryFigure } from "./figures.js";
import { parseState, timeFromName } from "./states.js";

interface Args {
  kind: FigureKind;
  inputs: string[];
  output: string;
  xiIndex: number;
}

function parseArgs(argv: string[]): Args {
  const get = (flag: string): string | undefined => {
    const i = argv.indexOf(flag);
    return i >= 0 && i + 1 < argv.length ? argv[i + 1] : undefined;
  };
  const kind = get("--kind") as FigureKind | undefined;
  const input = get("--in");
  const output = get("--out");
  if (!kind || !input || !output) {
    throw new Error("required flags: --kind KIND --in PATH[,PATH...] --out FILE.svg");
  }
  const kinds: FigureKind[] = ["monotonicity", "monitors", "profiles", "sweep-summary"];
  if (!kinds.includes(kind)) {
    throw new Error(`unknown figure kind '${kind}'; expected one of ${kinds.join(", ")}`);
  }
  return {
    kind,
    inputs: input.split(",").map((s) => s.trim()).filter((s) => s.length > 0),
    output,
    xiIndex: Number(get("--xi") ?? "0"),
  };
}

export function buildFigure(args: Args): string {
  if (args.kind === "profiles") {
    const paths = [...args.inputs].sort();
    const snapshots = paths.map((p) => {
      const snap = parseState(readFileSync(p, "utf8"), basename(p));
      snap.time = timeFromName(basename(p));
      return snap;
    });
    return profilesFigure(snapshots, args.xiIndex);
  }
  if (args.inputs.length !== 1) {
    throw new Error(`${args.kind} takes exactly one input CSV`);
  }
  const text = readFileSync(args.inputs[0], "utf8");
  if (args.kind === "monotonicity") return monotonicityFigure(text);
  if (args.kind === "monitors") return monitorsFigure(text);
  return sweepSummaryFigure(text);
}

export function main(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error(`argument error: ${(err as Error).message}`);
    return 2;
  }
  try {
    const svg = buildFigure(args);
    writeFileSync(args.output, svg);
    console.log(`wrote ${args.output}`);
    return 0;
  } catch (err) {
    console.error(`figure error: ${(err as Error).message}`);
    return 1;
  }
}

const invokedDirectly = process.argv[1] !== undefined && import.meta.url.endsWith(basename(process.argv[1]));
if (invokedDirectly) {
  process.exit(main(process.argv.slice(2)));
}
