/**
 * CLI: render <kind> --input file.csv [--input more.csv ...] --output fig.svg
 *                    [--x-scale linear|log] [--y-scale linear|log] [--title text]
 *
 * Exit codes: 0 success, 1 bad input (schema mismatch, empty data), 64 usage.
 */

import { readFileSync, writeFileSync } from "node:fs";

import { EmptyInputError, SchemaMismatchError } from "./csv.js";
import { FigureKind, FigureSpec, render } from "./figures.js";
import { RenderError, Scale } from "./svg.js";

const KINDS: FigureKind[] = ["profile", "band", "curve", "overlay", "blowup"];

function usage(message?: string): never {
  if (message) process.stderr.write(`error: ${message}\n`);
  process.stderr.write(
    "usage: render <profile|band|curve|overlay|blowup> --input f.csv [--input ...] " +
      "--output fig.svg [--x-scale linear|log] [--y-scale linear|log] [--title text]\n",
  );
  process.exit(64);
}

function parseScale(text: string): Scale {
  if (text !== "linear" && text !== "log") usage(`bad scale: ${text}`);
  return text;
}

export function main(argv: string[]): number {
  if (argv.length === 0) usage();
  const kind = argv[0] as FigureKind;
  if (!KINDS.includes(kind)) usage(`unknown figure kind: ${argv[0]}`);
  const inputPaths: string[] = [];
  let output: string | undefined;
  let xScale: Scale | undefined;
  let yScale: Scale | undefined;
  let title: string | undefined;
  for (let i = 1; i < argv.length; i += 2) {
    const flag = argv[i];
    const value = argv[i + 1];
    if (value === undefined) usage(`flag ${flag} needs a value`);
    switch (flag) {
      case "--input":
        inputPaths.push(value);
        break;
      case "--output":
        output = value;
        break;
      case "--x-scale":
        xScale = parseScale(value);
        break;
      case "--y-scale":
        yScale = parseScale(value);
        break;
      case "--title":
        title = value;
        break;
      default:
        usage(`unknown flag: ${flag}`);
    }
  }
  if (inputPaths.length === 0) usage("at least one --input is required");
  if (!output) usage("--output is required");
  try {
    const spec: FigureSpec = {
      kind,
      inputs: inputPaths.map((p) => readFileSync(p, "utf8")),
      xScale,
      yScale,
      title,
    };
    writeFileSync(output, render(spec));
    return 0;
  } catch (err) {
    if (
      err instanceof SchemaMismatchError ||
      err instanceof EmptyInputError ||
      err instanceof RenderError
    ) {
      process.stderr.write(`${err.name}: ${err.message}\n`);
      return 1;
    }
    throw err;
  }
}

if (process.argv[1] && process.argv[1].endsWith("main.js")) {
  process.exit(main(process.argv.slice(2)));
}
