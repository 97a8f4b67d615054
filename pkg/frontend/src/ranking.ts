// Reordering model for the three argument cards. The arrangement is always a
// strict total order of all displayed keys, so equal ranks cannot be
// expressed at all; submission maps positions to ranks 1..n.

export function moveCard(arrangement: string[], from: number, to: number): string[] {
  if (from < 0 || from >= arrangement.length || to < 0 || to >= arrangement.length) {
    return arrangement.slice();
  }
  const next = arrangement.slice();
  const [card] = next.splice(from, 1);
  next.splice(to, 0, card);
  return next;
}

export function ranksFromArrangement(arrangement: string[]): Record<string, number> {
  const ranks: Record<string, number> = {};
  arrangement.forEach((key, position) => {
    ranks[key] = position + 1;
  });
  return ranks;
}

export function isPermutationOf(arrangement: string[], keys: string[]): boolean {
  return (
    arrangement.length === keys.length &&
    new Set(arrangement).size === arrangement.length &&
    keys.every((k) => arrangement.includes(k))
  );
}
