/**
 * Wire types for the recommendation API.
 *
 * These mirror the server's JSON exactly; the client never rescoring or
 * renames fields, it only displays them.
 */

export type RecommendationType = "comfort_or_known" | "discovery";

export interface Recommendation {
  championName: string;
  recommendation_type: RecommendationType;
  archetype_name: string;
  final_score: number;
  win_score: number;
  fit_score: number;
  mastery_score: number;
  archetype_guardrail: number;
  population_strength_score: number;
  direct_mastery_score: number;
  indirect_mastery_score: number;
  player_games: number;
  similarity_raw: number;
}

export interface WeightsUsed {
  lambda_W: number;
  lambda_F: number;
  lambda_M: number;
  alpha: number;
  rho: number;
}

export interface ResponseMetadata {
  games: number;
  role_mix: Record<string, number>;
  top_archetypes: string[];
  weights_used: WeightsUsed;
  warnings: string[];
}

export interface RecommendResponse {
  recommendations: Recommendation[];
  metadata: ResponseMetadata;
}

export interface RecommendRequest {
  gameName: string;
  tagLine: string;
  topN: number;
  lambda_W?: number;
  lambda_F?: number;
  lambda_M?: number;
  alpha?: number;
  rho?: number;
}

export interface ApiError {
  error: string;
  message: string;
}
