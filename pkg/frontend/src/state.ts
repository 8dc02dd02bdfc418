/**
 * UI state and pure transitions.
 *
 * Slider weights are stored raw (whatever the user dragged to) and
 * normalized to sum 1 whenever they are displayed or sent; stale responses
 * are rejected by request sequence number so a slow early reply can never
 * overwrite a newer one.
 */

import type { RecommendRequest, RecommendResponse, RecommendationType } from "./types.js";

export const WEIGHT_SUM_TOLERANCE = 1e-6;

export type RequestStatus = "idle" | "loading" | "error";

export interface RawWeights {
  performance: number;
  fit: number;
  mastery: number;
}

export interface UiState {
  gameName: string;
  tagLine: string;
  rawWeights: RawWeights;
  alpha: number;
  rho: number;
  topN: number;
  typeFilter: RecommendationType | "all";
  archetypeFilter: string | "all";
  status: RequestStatus;
  errorMessage: string | null;
  lastResponse: RecommendResponse | null;
  /** Sequence number of the newest request issued. */
  latestRequest: number;
  /** Sequence number of the response currently displayed. */
  displayedResponse: number;
}

export function initialState(): UiState {
  return {
    gameName: "",
    tagLine: "",
    rawWeights: { performance: 0.5, fit: 0.25, mastery: 0.25 },
    alpha: 0.75,
    rho: 0.18,
    topN: 30,
    typeFilter: "all",
    archetypeFilter: "all",
    status: "idle",
    errorMessage: null,
    lastResponse: null,
    latestRequest: 0,
    displayedResponse: 0,
  };
}

/** Normalized blend weights; a degenerate all-zero drag falls back to the
 * default split rather than emitting NaN. */
export function normalizedWeights(raw: RawWeights): {
  lambda_W: number;
  lambda_F: number;
  lambda_M: number;
} {
  const total = raw.performance + raw.fit + raw.mastery;
  if (total <= 0) {
    return { lambda_W: 0.5, lambda_F: 0.25, lambda_M: 0.25 };
  }
  return {
    lambda_W: raw.performance / total,
    lambda_F: raw.fit / total,
    lambda_M: raw.mastery / total,
  };
}

export function setPlayer(state: UiState, gameName: string, tagLine: string): UiState {
  return { ...state, gameName: gameName.trim(), tagLine: tagLine.trim() };
}

export function setRawWeight(state: UiState, key: keyof RawWeights, value: number): UiState {
  const clamped = Math.max(0, Math.min(1, value));
  return { ...state, rawWeights: { ...state.rawWeights, [key]: clamped } };
}

export function setAlpha(state: UiState, alpha: number): UiState {
  return { ...state, alpha: Math.max(0, alpha) };
}

export function setRho(state: UiState, rho: number): UiState {
  return { ...state, rho: Math.max(0, rho) };
}

export function setTopN(state: UiState, topN: number): UiState {
  return { ...state, topN: Math.max(1, Math.round(topN)) };
}

export function setTypeFilter(state: UiState, filter: UiState["typeFilter"]): UiState {
  return { ...state, typeFilter: filter };
}

export function setArchetypeFilter(state: UiState, filter: string | "all"): UiState {
  return { ...state, archetypeFilter: filter };
}

/** Build the outgoing request body from the current state. */
export function buildRecommendPayload(state: UiState): RecommendRequest {
  return {
    gameName: state.gameName,
    tagLine: state.tagLine,
    topN: state.topN,
    ...normalizedWeights(state.rawWeights),
    alpha: state.alpha,
    rho: state.rho,
  };
}

/** Mark a new request in flight; returns its sequence number. */
export function requestStarted(state: UiState): { state: UiState; seq: number } {
  const seq = state.latestRequest + 1;
  return { state: { ...state, latestRequest: seq, status: "loading" }, seq };
}

/**
 * Apply a response only if it belongs to the newest request; an out-of-date
 * response leaves the state untouched.
 */
export function responseArrived(
  state: UiState,
  seq: number,
  response: RecommendResponse,
): UiState {
  if (seq !== state.latestRequest || seq <= state.displayedResponse) {
    return state;
  }
  return {
    ...state,
    status: "idle",
    errorMessage: null,
    lastResponse: response,
    displayedResponse: seq,
  };
}

/** Server-side validation failures keep the previous response and sliders. */
export function requestFailed(state: UiState, seq: number, message: string): UiState {
  if (seq !== state.latestRequest) {
    return state;
  }
  return { ...state, status: "error", errorMessage: message };
}
