/**
 * DOM wiring: sliders and lookup controls update the state, re-queries are
 * debounced, and responses render as ranked cards in server order.
 */

import { postRecommend } from "./api.js";
import { archetypeOptions, buildCardList, buildMetadataSummary } from "./cards.js";
import { debounce, REQUERY_DEBOUNCE_MS } from "./debounce.js";
import {
  buildRecommendPayload,
  initialState,
  normalizedWeights,
  requestFailed,
  requestStarted,
  responseArrived,
  setAlpha,
  setArchetypeFilter,
  setPlayer,
  setRawWeight,
  setRho,
  setTopN,
  setTypeFilter,
  type RawWeights,
  type UiState,
} from "./state.js";

const API_BASE =
  new URLSearchParams(window.location.search).get("api") ?? "http://127.0.0.1:8000";

let state: UiState = initialState();

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing element #${id}`);
  return found as T;
}

const cardsHost = el<HTMLDivElement>("cards");
const metaHost = el<HTMLDivElement>("metadata");
const statusHost = el<HTMLParagraphElement>("status");
const weightReadout = el<HTMLParagraphElement>("weight-readout");
const archetypeSelect = el<HTMLSelectElement>("archetype-filter");

function renderWeights(): void {
  const weights = normalizedWeights(state.rawWeights);
  weightReadout.textContent =
    `W ${weights.lambda_W.toFixed(2)} · F ${weights.lambda_F.toFixed(2)}` +
    ` · M ${weights.lambda_M.toFixed(2)}`;
}

function renderStatus(): void {
  statusHost.textContent =
    state.status === "loading"
      ? "Loading…"
      : state.status === "error"
        ? `Error: ${state.errorMessage ?? "request failed"}`
        : "";
  statusHost.className = state.status === "error" ? "status status-error" : "status";
}

function renderCards(): void {
  cardsHost.innerHTML = buildCardList(state.lastResponse, state);
  metaHost.innerHTML = state.lastResponse ? buildMetadataSummary(state.lastResponse) : "";
}

function renderArchetypeOptions(): void {
  if (!state.lastResponse) return;
  const current = archetypeSelect.value;
  const options = ["all", ...archetypeOptions(state.lastResponse)];
  archetypeSelect.innerHTML = options
    .map((o) => `<option value="${o}">${o === "all" ? "all archetypes" : o}</option>`)
    .join("");
  archetypeSelect.value = options.includes(current) ? current : "all";
}

async function requery(): Promise<void> {
  if (!state.gameName || !state.tagLine) return;
  const started = requestStarted(state);
  state = started.state;
  renderStatus();
  const outcome = await postRecommend(API_BASE, buildRecommendPayload(state));
  if (outcome.kind === "ok") {
    state = responseArrived(state, started.seq, outcome.response);
    renderArchetypeOptions();
    renderCards();
  } else if (outcome.kind === "api_error") {
    state = requestFailed(state, started.seq, outcome.error.message);
  } else {
    state = requestFailed(state, started.seq, outcome.message);
  }
  renderStatus();
}

const debouncedRequery = debounce(() => void requery(), REQUERY_DEBOUNCE_MS);

function bindSlider(id: string, key: keyof RawWeights): void {
  const slider = el<HTMLInputElement>(id);
  slider.addEventListener("input", () => {
    state = setRawWeight(state, key, Number(slider.value));
    renderWeights();
    debouncedRequery();
  });
}

bindSlider("weight-performance", "performance");
bindSlider("weight-fit", "fit");
bindSlider("weight-mastery", "mastery");

el<HTMLInputElement>("alpha").addEventListener("input", (event) => {
  state = setAlpha(state, Number((event.target as HTMLInputElement).value));
  debouncedRequery();
});

el<HTMLInputElement>("rho").addEventListener("input", (event) => {
  state = setRho(state, Number((event.target as HTMLInputElement).value));
  debouncedRequery();
});

el<HTMLInputElement>("top-n").addEventListener("change", (event) => {
  state = setTopN(state, Number((event.target as HTMLInputElement).value));
  debouncedRequery();
});

el<HTMLSelectElement>("type-filter").addEventListener("change", (event) => {
  const value = (event.target as HTMLSelectElement).value as UiState["typeFilter"];
  state = setTypeFilter(state, value);
  renderCards();
});

archetypeSelect.addEventListener("change", () => {
  state = setArchetypeFilter(state, archetypeSelect.value);
  renderCards();
});

el<HTMLFormElement>("lookup-form").addEventListener("submit", (event) => {
  event.preventDefault();
  state = setPlayer(
    state,
    el<HTMLInputElement>("game-name").value,
    el<HTMLInputElement>("tag-line").value,
  );
  debouncedRequery.cancel();
  void requery();
});

renderWeights();
renderStatus();
renderCards();
