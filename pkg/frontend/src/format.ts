/**
 * Display formatting. Bars show the server's values rounded to 3 decimals;
 * there is no client-side rescoring.
 */

import type { Recommendation } from "./types.js";

/** Fixed 3-decimal score text, e.g. 0.804. */
export function formatScore(value: number): string {
  return value.toFixed(3);
}

/** Bar width percent for a [0, 1] score, clamped. */
export function barWidthPercent(value: number): number {
  const clamped = Math.max(0, Math.min(1, value));
  return Math.round(clamped * 1000) / 10;
}

export type DominantComponent = "performance" | "fit" | "mastery";

/**
 * The component that drives the recommendation: the largest of the win
 * proxy, fit and mastery scores, with ties going to fit.
 */
export function dominantComponent(rec: Recommendation): DominantComponent {
  const { win_score, fit_score, mastery_score } = rec;
  const peak = Math.max(win_score, fit_score, mastery_score);
  if (fit_score === peak) return "fit";
  if (win_score === peak) return "performance";
  return "mastery";
}

const EXPLANATIONS: Record<DominantComponent, string> = {
  fit: "Recommended mainly for style fit",
  mastery: "Recommended mainly for existing mastery",
  performance: "Recommended mainly for expected performance",
};

export function explanationText(rec: Recommendation): string {
  return EXPLANATIONS[dominantComponent(rec)];
}
