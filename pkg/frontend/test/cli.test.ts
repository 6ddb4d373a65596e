import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";
import { main, parseArgs } from "../src/cli.js";

const FIX = fileURLToPath(new URL("./fixtures", import.meta.url));

describe("parseArgs", () => {
  it("parses kind, inputs, and output", () => {
    const args = parseArgs(["energy_budget", "--in", "a.csv", "--out", "f.svg"]);
    expect(args).toEqual({ kind: "energy_budget", inputs: ["a.csv"], out: "f.svg" });
  });

  it("accepts two --in paths", () => {
    const args = parseArgs([
      "continuous_dependence",
      "--in", "cd.csv",
      "--in", "fits.csv",
      "--out", "f.svg",
    ]);
    expect(args.inputs).toEqual(["cd.csv", "fits.csv"]);
  });

  it.each([
    [[], /missing FIGURE_KIND/],
    [["nope", "--in", "a", "--out", "b"], /unknown figure kind/],
    [["energy_budget", "--out", "b"], /--in/],
    [["energy_budget", "--in", "a"], /--out/],
    [["energy_budget", "--in"], /--in needs a path/],
    [["energy_budget", "--in", "a", "--out", "b", "extra"], /unexpected argument/],
  ])("rejects %j", (argv, pattern) => {
    expect(() => parseArgs(argv as string[])).toThrow(pattern);
  });
});

describe("main", () => {
  it("renders each figure end to end", () => {
    const dir = mkdtempSync(join(tmpdir(), "plotkit-"));
    const jobs: [string, string[]][] = [
      ["energy_budget", ["diagnostics.csv"]],
      ["enstrophy_margin", ["enstrophy_series.csv"]],
      ["convergence", ["convergence.csv"]],
      ["continuous_dependence", ["continuous_dependence.csv", "cd_fits.csv"]],
      ["inequality_ratios", ["inequality_results.csv", "inequality_constants.csv"]],
    ];
    for (const [kind, files] of jobs) {
      const out = join(dir, `${kind}.svg`);
      const argv = [kind];
      for (const f of files) argv.push("--in", join(FIX, f));
      argv.push("--out", out);
      expect(main(argv)).toBe(0);
      const svg = readFileSync(out, "utf-8");
      expect(svg.startsWith("<svg")).toBe(true);
      expect(svg.trimEnd().endsWith("</svg>")).toBe(true);
    }
  });

  it("returns 1 for usage errors", () => {
    expect(main([])).toBe(1);
    expect(main(["bogus_kind", "--in", "a", "--out", "b"])).toBe(1);
  });

  it("returns 2 for a missing input file", () => {
    const dir = mkdtempSync(join(tmpdir(), "plotkit-"));
    expect(main(["energy_budget", "--in", join(dir, "absent.csv"), "--out", join(dir, "o.svg")])).toBe(2);
  });

  it("returns 2 for an input without a schema line", () => {
    const dir = mkdtempSync(join(tmpdir(), "plotkit-"));
    const bad = join(dir, "bad.csv");
    writeFileSync(bad, "t,energy\n0,1\n", "utf-8");
    expect(main(["energy_budget", "--in", bad, "--out", join(dir, "o.svg")])).toBe(2);
  });

  it("returns 2 when the CSV kind does not match the figure", () => {
    const dir = mkdtempSync(join(tmpdir(), "plotkit-"));
    const out = join(dir, "o.svg");
    expect(main(["energy_budget", "--in", join(FIX, "convergence.csv"), "--out", out])).toBe(2);
  });

  it("writes byte-identical output across invocations", () => {
    const dir = mkdtempSync(join(tmpdir(), "plotkit-"));
    const a = join(dir, "a.svg");
    const b = join(dir, "b.svg");
    const argv = (out: string) => [
      "convergence", "--in", join(FIX, "convergence.csv"), "--out", out,
    ];
    expect(main(argv(a))).toBe(0);
    expect(main(argv(b))).toBe(0);
    expect(readFileSync(a, "utf-8")).toBe(readFileSync(b, "utf-8"));
  });
});
