/** Wire types of the scoring service. */

export interface FeatureContribution {
  name: string;
  value: number;
  coefficient: number;
  contribution: number;
}

export interface ScoreResponse {
  score: number;
  level: number | null;
  features: FeatureContribution[];
  warnings: string[];
}

export interface ModelInfo {
  modelId: string;
  subset: string[];
  intercept: number;
  levels: number[];
  capabilities: { parser: boolean };
}

export interface HistoryPoint {
  timestamp: number;
  score: number;
  level: number | null;
}

export interface Settings {
  serviceUrl: string;
  targetGrade: number;
}
