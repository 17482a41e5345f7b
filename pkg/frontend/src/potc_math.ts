// The one piece of arithmetic the console is allowed: the chained product
// of conditional task-completion probabilities, shown as an *estimate* --
// authoritative values always come from sequential predict calls.

export function chainedEstimate(potcs: number[]): number {
  let product = 1.0;
  for (const p of potcs) product *= p;
  return product;
}

/** Display formatting for probabilities (6 significant decimals). */
export function formatPotc(p: number): string {
  return p.toFixed(6);
}
