/**
 * Thin client for POST /recommend with injectable fetch (testable without a
 * browser or a live server).
 */

import type { ApiError, RecommendRequest, RecommendResponse } from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export type RecommendOutcome =
  | { kind: "ok"; response: RecommendResponse }
  | { kind: "api_error"; status: number; error: ApiError }
  | { kind: "network_error"; message: string };

export async function postRecommend(
  baseUrl: string,
  payload: RecommendRequest,
  fetchImpl: FetchLike = fetch,
): Promise<RecommendOutcome> {
  let response: Response;
  try {
    response = await fetchImpl(`${baseUrl.replace(/\/$/, "")}/recommend`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(payload),
    });
  } catch (err) {
    return { kind: "network_error", message: err instanceof Error ? err.message : String(err) };
  }
  if (!response.ok) {
    let error: ApiError = { error: "http_error", message: `status ${response.status}` };
    try {
      error = (await response.json()) as ApiError;
    } catch {
      // non-JSON error body; keep the generic message
    }
    return { kind: "api_error", status: response.status, error };
  }
  return { kind: "ok", response: (await response.json()) as RecommendResponse };
}
