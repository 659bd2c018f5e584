import type { Scorer } from "./api.js";
import { Debouncer } from "./debounce.js";
import type { HistoryPoint, ScoreResponse } from "./types.js";

/** One authoring session: the text under edit, the latest service response,
 * and an append-only score history.
 *
 * At most one request is in flight; edits during a flight queue exactly one
 * follow-up. Responses older than the newest dispatched request are
 * discarded by sequence number, so the displayed level always belongs to
 * the latest applied response. A failed request raises the outage flag but
 * keeps the text and the last good response.
 */
export class EditorSession {
  text = "";
  targetGrade: number;
  lastResponse: ScoreResponse | null = null;
  serviceDown = false;
  readonly history: HistoryPoint[] = [];

  private sequence = 0;
  private inFlight = false;
  private pending = false;
  private debouncer: Debouncer;
  private listeners: Array<() => void> = [];

  constructor(
    private client: Scorer,
    options: {
      targetGrade?: number;
      debounceMs?: number;
      now?: () => number;
    } = {},
  ) {
    this.targetGrade = options.targetGrade ?? 3;
    this.now = options.now ?? (() => Date.now());
    this.debouncer = new Debouncer(options.debounceMs ?? 400, this.now);
  }

  private now: () => number;

  onChange(listener: () => void): void {
    this.listeners.push(listener);
  }

  private notify(): void {
    for (const listener of this.listeners) listener();
  }

  /** Update the text and schedule a debounced rescore. */
  setText(text: string): void {
    this.text = text;
    this.debouncer.schedule(() => void this.rescore());
  }

  /** Issue the scoring request now (the debouncer calls this). */
  async rescore(): Promise<void> {
    if (this.inFlight) {
      this.pending = true;
      return;
    }
    this.inFlight = true;
    const seq = ++this.sequence;
    try {
      const response = await this.client.score(this.text);
      if (seq === this.sequence) {
        this.lastResponse = response;
        this.serviceDown = false;
        this.history.push({
          timestamp: this.now(),
          score: response.score,
          level: response.level,
        });
        this.notify();
      }
    } catch {
      if (seq === this.sequence) {
        this.serviceDown = true; // banner only: text and last result survive
        this.notify();
      }
    } finally {
      this.inFlight = false;
      if (this.pending) {
        this.pending = false;
        void this.rescore();
      }
    }
  }

  /** The level currently shown: always the latest response's level. */
  get displayedLevel(): number | null {
    return this.lastResponse ? this.lastResponse.level : null;
  }
}
