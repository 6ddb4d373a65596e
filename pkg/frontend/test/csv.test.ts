import { readFileSync } from "node:fs";
import { join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";
import { column, parseCsv, rawColumn } from "../src/csv.js";

const FIX = fileURLToPath(new URL("./fixtures", import.meta.url));

function fixture(name: string): string {
  return readFileSync(join(FIX, name), "utf-8");
}

describe("parseCsv", () => {
  it("reads the diagnostics fixture with its schema line", () => {
    const table = parseCsv(fixture("diagnostics.csv"), "diagnostics");
    expect(table.kind).toBe("diagnostics");
    expect(table.version).toBe(1);
    expect(table.columns).toContain("t");
    expect(table.columns).toContain("energy");
    expect(table.columns).toContain("energy_residual");
    expect(table.rows.length).toBeGreaterThan(10);
  });

  it.each([
    ["enstrophy_series.csv", "enstrophy-series"],
    ["convergence.csv", "convergence"],
    ["continuous_dependence.csv", "cdep"],
    ["cd_fits.csv", "cdep-fit"],
    ["inequality_results.csv", "inequality"],
    ["inequality_constants.csv", "inequality-constants"],
  ])("reads %s as kind %s", (file, kind) => {
    const table = parseCsv(fixture(file));
    expect(table.kind).toBe(kind);
    expect(table.rows.length).toBeGreaterThan(0);
  });

  it("rejects input without a schema line", () => {
    expect(() => parseCsv("t,x\n0,1\n")).toThrow(/schema line/);
  });

  it("rejects a mismatched kind", () => {
    expect(() => parseCsv(fixture("convergence.csv"), "diagnostics")).toThrow(
      /expected diagnostics/,
    );
  });

  it("rejects ragged rows", () => {
    expect(() => parseCsv("# mima3d test-csv v1\na,b\n1,2,3\n")).toThrow(/3 cells/);
  });

  it("parses booleans and strings", () => {
    const table = parseCsv("# mima3d test-csv v1\nname,ok,x\nfoo,true,1.5\nbar,false,2\n");
    expect(table.rows[0]).toEqual(["foo", true, 1.5]);
    expect(table.rows[1]).toEqual(["bar", false, 2]);
    expect(rawColumn(table, "ok")).toEqual([true, false]);
  });
});

describe("column", () => {
  it("extracts numeric columns", () => {
    const table = parseCsv(fixture("convergence.csv"));
    const m = column(table, "m");
    expect(m.every((v) => typeof v === "number")).toBe(true);
  });

  it("throws for missing columns", () => {
    const table = parseCsv(fixture("convergence.csv"));
    expect(() => column(table, "nope")).toThrow(/no column/);
  });

  it("throws for non-numeric values", () => {
    const table = parseCsv(fixture("inequality_results.csv"));
    expect(() => column(table, "inequality")).toThrow(/non-numeric/);
  });
});
