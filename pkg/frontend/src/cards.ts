/**
 * Champion card rendering as pure HTML-string builders.
 *
 * Cards keep the server's ranking order; filters only hide cards, they never
 * reorder or rescore them.
 */

import { barWidthPercent, explanationText, formatScore } from "./format.js";
import type { Recommendation, RecommendResponse } from "./types.js";
import type { UiState } from "./state.js";

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

interface BarSpec {
  label: string;
  value: number;
  kind: string;
}

function bars(rec: Recommendation): BarSpec[] {
  return [
    { label: "Final", value: rec.final_score, kind: "final" },
    { label: "Win proxy", value: rec.win_score, kind: "win" },
    { label: "Fit", value: rec.fit_score, kind: "fit" },
    { label: "Mastery", value: rec.mastery_score, kind: "mastery" },
    { label: "Guardrail", value: rec.archetype_guardrail, kind: "guardrail" },
  ];
}

function buildBar(bar: BarSpec): string {
  const width = barWidthPercent(bar.value);
  return `
    <div class="score-row">
      <span class="score-label">${bar.label}</span>
      <div class="score-track">
        <div class="score-bar score-bar-${bar.kind}" style="width: ${width}%"></div>
      </div>
      <span class="score-value">${formatScore(bar.value)}</span>
    </div>`;
}

export function buildCard(rec: Recommendation): string {
  const badgeClass = rec.recommendation_type === "discovery" ? "badge-discovery" : "badge-comfort";
  const badgeText = rec.recommendation_type === "discovery" ? "discovery" : "comfort";
  return `
  <article class="card" data-champion="${escapeHtml(rec.championName)}"
           data-type="${rec.recommendation_type}"
           data-archetype="${escapeHtml(rec.archetype_name)}">
    <header class="card-header">
      <h3 class="card-title">${escapeHtml(rec.championName)}</h3>
      <span class="badge ${badgeClass}">${badgeText}</span>
    </header>
    <p class="card-archetype">${escapeHtml(rec.archetype_name)} · ${rec.player_games} games</p>
    <div class="card-bars">${bars(rec).map(buildBar).join("")}</div>
    <p class="card-explanation">${explanationText(rec)}</p>
  </article>`;
}

/** Cards passing the active type/archetype filters, in server order. */
export function visibleRecommendations(
  response: RecommendResponse,
  state: Pick<UiState, "typeFilter" | "archetypeFilter">,
): Recommendation[] {
  return response.recommendations.filter((rec) => {
    if (state.typeFilter !== "all" && rec.recommendation_type !== state.typeFilter) {
      return false;
    }
    if (state.archetypeFilter !== "all" && rec.archetype_name !== state.archetypeFilter) {
      return false;
    }
    return true;
  });
}

export function buildCardList(
  response: RecommendResponse | null,
  state: Pick<UiState, "typeFilter" | "archetypeFilter">,
): string {
  if (response === null) {
    return `<p class="empty-state">Look up a player to see recommendations.</p>`;
  }
  const visible = visibleRecommendations(response, state);
  if (visible.length === 0) {
    return `<p class="empty-state">No recommendations match the current filters.</p>`;
  }
  return visible.map(buildCard).join("\n");
}

export function buildMetadataSummary(response: RecommendResponse): string {
  const meta = response.metadata;
  const roles = Object.entries(meta.role_mix)
    .map(([role, count]) => `${escapeHtml(role)}: ${count}`)
    .join(", ");
  const archetypes = meta.top_archetypes.map(escapeHtml).join(", ");
  const warnings = meta.warnings.length
    ? `<p class="meta-warnings">${meta.warnings.map(escapeHtml).join("<br>")}</p>`
    : "";
  return `
    <p class="meta-line">${meta.games} games · roles ${roles || "unknown"}</p>
    <p class="meta-line">Top archetypes: ${archetypes || "none"}</p>
    ${warnings}`;
}

/** Distinct archetype labels present in the response, for the filter menu. */
export function archetypeOptions(response: RecommendResponse): string[] {
  const seen = new Set<string>();
  for (const rec of response.recommendations) {
    seen.add(rec.archetype_name);
  }
  return [...seen].sort();
}
