import type { ModelInfo, ScoreResponse } from "./types.js";

export class ServiceError extends Error {
  constructor(public status: number, public detail: unknown) {
    super(`service returned ${status}`);
  }
}

/** What the editor session needs from a scoring backend. */
export interface Scorer {
  score(text: string, modelId?: string): Promise<ScoreResponse>;
}

/** Thin client for the scoring service; every displayed number comes from
 * one of these responses, never from local computation. */
export class ScoreClient implements Scorer {
  constructor(
    private baseUrl: string,
    private fetchFn: typeof fetch = (...args) => fetch(...args),
  ) {}

  async score(text: string, modelId?: string): Promise<ScoreResponse> {
    const body = modelId === undefined ? { text } : { text, modelId };
    const response = await this.fetchFn(`${this.baseUrl}/score`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!response.ok) {
      let detail: unknown = null;
      try {
        detail = await response.json();
      } catch {
        /* non-JSON error body */
      }
      throw new ServiceError(response.status, detail);
    }
    return response.json();
  }

  async modelInfo(): Promise<ModelInfo> {
    const response = await this.fetchFn(`${this.baseUrl}/model`);
    if (!response.ok) throw new ServiceError(response.status, null);
    return response.json();
  }
}
