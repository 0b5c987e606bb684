/** Fitness coloring. The server never defines "garbled" numerically, so
 * thresholds come from the score distribution of the session itself:
 * anything in the bottom tail against the session's own upper quartile
 * is painted as suspect. */

export interface Thresholds {
  low: number;
  high: number;
}

function quantile(sorted: number[], q: number): number {
  if (sorted.length === 0) return 0;
  const pos = (sorted.length - 1) * q;
  const lo = Math.floor(pos);
  const hi = Math.ceil(pos);
  if (lo === hi) return sorted[lo];
  return sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo);
}

export function fitnessThresholds(fitness: number[]): Thresholds {
  const sorted = [...fitness].sort((a, b) => a - b);
  const q75 = quantile(sorted, 0.75);
  // A healthy window sits near the upper quartile; a garbled one sits
  // several bits of log-likelihood below it.
  return { low: q75 - 1.5, high: q75 - 0.5 };
}

export type FitnessBand = "good" | "warn" | "bad";

export function fitnessBand(value: number, t: Thresholds): FitnessBand {
  if (value < t.low) return "bad";
  if (value < t.high) return "warn";
  return "good";
}

/** First position whose fitness falls into the bad band; the server's
 * changepoint estimate wins when present, since it sees the raw bigram
 * series rather than smoothed windows. */
export function firstLowFitness(
  fitness: number[],
  suspect: number | null,
): number | null {
  if (suspect !== null) return suspect;
  const t = fitnessThresholds(fitness);
  for (let i = 0; i < fitness.length; i++) {
    if (fitnessBand(fitness[i], t) === "bad") return i;
  }
  return null;
}
