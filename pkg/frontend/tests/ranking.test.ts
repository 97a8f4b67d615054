import { describe, expect, it } from "vitest";

import { isPermutationOf, moveCard, ranksFromArrangement } from "../src/ranking.js";

describe("moveCard", () => {
  it("moves a card up", () => {
    expect(moveCard(["A", "B", "C"], 1, 0)).toEqual(["B", "A", "C"]);
  });

  it("moves a card down", () => {
    expect(moveCard(["A", "B", "C"], 0, 2)).toEqual(["B", "C", "A"]);
  });

  it("ignores out-of-range moves", () => {
    expect(moveCard(["A", "B", "C"], -1, 0)).toEqual(["A", "B", "C"]);
    expect(moveCard(["A", "B", "C"], 0, 3)).toEqual(["A", "B", "C"]);
  });

  it("does not mutate its input", () => {
    const input = ["A", "B", "C"];
    moveCard(input, 0, 2);
    expect(input).toEqual(["A", "B", "C"]);
  });

  it("keeps the arrangement a permutation under arbitrary moves", () => {
    let arrangement = ["A", "B", "C"];
    let seed = 7;
    for (let step = 0; step < 200; step++) {
      seed = (seed * 1103515245 + 12345) % 2147483648;
      const from = seed % 3;
      const to = (seed >> 3) % 3;
      arrangement = moveCard(arrangement, from, to);
      expect(isPermutationOf(arrangement, ["A", "B", "C"])).toBe(true);
    }
  });
});

describe("ranksFromArrangement", () => {
  it("maps positions to ranks 1..n", () => {
    expect(ranksFromArrangement(["B", "A", "C"])).toEqual({ B: 1, A: 2, C: 3 });
  });

  it("always yields a strict total order", () => {
    const ranks = ranksFromArrangement(["C", "B", "A"]);
    expect(Object.values(ranks).sort()).toEqual([1, 2, 3]);
  });
});

describe("isPermutationOf", () => {
  it("rejects duplicates and missing keys", () => {
    expect(isPermutationOf(["A", "A", "B"], ["A", "B", "C"])).toBe(false);
    expect(isPermutationOf(["A", "B"], ["A", "B", "C"])).toBe(false);
    expect(isPermutationOf(["C", "A", "B"], ["A", "B", "C"])).toBe(true);
  });
});
