import { readFileSync, readdirSync } from "node:fs";
import { describe, expect, it } from "vitest";

/**
 * The dashboard must display service numbers verbatim: no rounding, no
 * formatting, no recomputation. These checks scan the shipped sources for
 * anything that would transform a score or vitals value.
 */

const VALUE_FIELDS = [
  "score",
  "hr_bpm",
  "rr_brpm",
  "spo2_pct",
  "heart_rate",
  "respiratory_rate",
  "spo2",
  "body_temp",
  "confidence",
  "contributions",
];

function sourceFiles(): Array<[string, string]> {
  const files: Array<[string, string]> = [];
  for (const dir of ["src", "src/render"]) {
    for (const name of readdirSync(new URL(`../${dir}/`, import.meta.url))) {
      if (!name.endsWith(".ts")) continue;
      const path = new URL(`../${dir}/${name}`, import.meta.url);
      files.push([`${dir}/${name}`, readFileSync(path, "utf8")]);
    }
  }
  return files;
}

describe("no client-side arithmetic on displayed values", () => {
  const sources = sourceFiles();

  it("finds the sources it is supposed to police", () => {
    const names = sources.map(([n]) => n);
    expect(names).toContain("src/render/board.ts");
    expect(names).toContain("src/render/jobs.ts");
    expect(names).toContain("src/api.ts");
  });

  it("never formats or rounds numbers", () => {
    const banned = /\b(toFixed|toPrecision|Math\.(round|floor|ceil|trunc|abs))\b/;
    for (const [name, text] of sources) {
      expect(text, `${name} must not reformat numbers`).not.toMatch(banned);
    }
  });

  it("never applies arithmetic to score or vitals fields", () => {
    const fields = VALUE_FIELDS.join("|");
    // value used as an operand of + - * / %, on either side
    const left = new RegExp(`(?:${fields})\\]?\\s*[-+*/%]\\s*[\\w.([]`);
    const right = new RegExp(`[\\w.)\\]]\\s*[-+*/%]\\s*(?:\\w+\\.)?(?:${fields})\\b`);
    for (const [name, text] of sources) {
      for (const line of text.split("\n")) {
        if (line.trimStart().startsWith("//") || line.trimStart().startsWith("*")) continue;
        expect(line, `${name}: "${line.trim()}"`).not.toMatch(left);
        expect(line, `${name}: "${line.trim()}"`).not.toMatch(right);
      }
    }
  });

  it("renders values through String conversion only", () => {
    const board = readFileSync(new URL("../src/render/board.ts", import.meta.url), "utf8");
    const jobs = readFileSync(new URL("../src/render/jobs.ts", import.meta.url), "utf8");
    expect(board).toContain("esc(p.score)");
    expect(jobs).toContain("esc(value)");
  });
});
