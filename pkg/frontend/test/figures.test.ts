import { readdirSync, readFileSync } from "node:fs";
import { join } from "node:path";
import { fileURLToPath } from "node:url";

import { describe, expect, it } from "vitest";

import { EmptyInputError, numericColumn, parseTable, SchemaMismatchError } from "../src/csv.js";
import { FigureSpec, render } from "../src/figures.js";

const FIXTURES = fileURLToPath(new URL("../fixtures", import.meta.url));

function fixture(name: string): string {
  return readFileSync(join(FIXTURES, name), "utf8");
}

function fixtures(prefix: string): string[] {
  return readdirSync(FIXTURES)
    .filter((f) => f.startsWith(prefix))
    .sort()
    .map(fixture);
}

const SPECS: Record<string, FigureSpec> = {
  profile: { kind: "profile", inputs: [fixture("profile_g3.csv")] },
  band: { kind: "band", inputs: [fixture("band_heat.csv")] },
  curve: { kind: "curve", inputs: fixtures("spectrum_beta_") },
  overlay: { kind: "overlay", inputs: [fixture("overlay_sim.csv")] },
  blowup: { kind: "blowup", inputs: fixtures("wellposed_p_") },
};

describe("csv reader", () => {
  it("parses the versioned schema and reprints values losslessly", () => {
    const table = parseTable(fixture("profile_g3.csv"), "eval-kernel");
    expect(table.schema).toBe("eval-kernel");
    expect(table.version).toBe("v1");
    expect(table.columns).toContain("value");
    const values = numericColumn(table, "value");
    expect(values.length).toBe(table.rows.length);
    // 17-significant-digit round trip: Number(text) reprints to the same text
    for (const row of table.rows) {
      const v = Number(row.value);
      expect(Number(v.toPrecision(17)).toString()).toBe(Number(row.value).toString());
    }
  });

  it("rejects a wrong schema name", () => {
    expect(() => parseTable(fixture("profile_g3.csv"), "simulate")).toThrow(SchemaMismatchError);
  });

  it("rejects an unsupported version", () => {
    const text = "# schema=eval-kernel/v2\nradius,value\n1,2\n";
    expect(() => parseTable(text)).toThrow(SchemaMismatchError);
  });

  it("rejects ragged rows", () => {
    const text = "# schema=eval-kernel/v1\nradius,value\n1\n";
    expect(() => parseTable(text)).toThrow(SchemaMismatchError);
  });

  it("decodes inf per the CLI contract", () => {
    const text = "# schema=dictionary/v1\nbeta,alpha\n0,inf\n";
    const table = parseTable(text, "dictionary");
    expect(numericColumn(table, "alpha")[0]).toBe(Infinity);
  });
});

describe("figure rendering", () => {
  for (const [name, spec] of Object.entries(SPECS)) {
    it(`renders the ${name} figure`, () => {
      const svg = render(spec);
      expect(svg.startsWith("<svg ")).toBe(true);
      expect(svg).toContain("</svg>");
    });

    it(`${name} is byte-identical across re-runs`, () => {
      expect(render(spec)).toBe(render(spec));
    });
  }

  it("contains no timestamps or nondeterministic ids", () => {
    const svg = render(SPECS.profile);
    expect(svg).not.toMatch(/\d{4}-\d{2}-\d{2}/);
    expect(svg).not.toMatch(/id="[0-9a-f]{8}/);
  });

  it("profile of the n=3 kernel has log-log slope ~ -1 near zero", () => {
    const table = parseTable(fixture("profile_g3.csv"), "eval-kernel");
    const radius = numericColumn(table, "radius");
    const value = numericColumn(table, "value");
    const slope =
      (Math.log(value[1]) - Math.log(value[0])) / (Math.log(radius[1]) - Math.log(radius[0]));
    expect(Math.abs(slope + 1)).toBeLessThan(0.05);
  });

  it("band figure keeps the shaded envelope inside the data range", () => {
    const svg = render(SPECS.band);
    expect(svg).toContain("<polygon");
  });

  it("curve fixture crosses e^-1 at beta = 2", () => {
    const tables = fixtures("spectrum_beta_").map((text) => parseTable(text, "spectrum"));
    const at2 = tables.find((t) => Number(t.rows[0].beta) === 2);
    expect(at2).toBeDefined();
    expect(Math.abs(numericColumn(at2!, "lam")[0] - Math.exp(-1))).toBeLessThan(1e-12);
  });

  it("empty ensemble input yields a clean error", () => {
    const empty = "# schema=simulate/v1\ntime,mean,variance,variance_oracle_terminal\n";
    expect(() => render({ kind: "overlay", inputs: [empty] })).toThrow(EmptyInputError);
  });

  it("schema mismatch across figures is an explicit version error", () => {
    expect(() => render({ kind: "overlay", inputs: [fixture("band_heat.csv")] })).toThrow(
      SchemaMismatchError,
    );
  });
});
