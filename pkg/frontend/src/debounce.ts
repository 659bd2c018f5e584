/** Debouncer with a firing deadline.
 *
 * The first schedule of a burst fixes a deadline `delayMs` ahead; further
 * schedules inside the burst reschedule the timer but never push the
 * deadline back. A single edit therefore fires after `delayMs` of quiet,
 * while nonstop typing still fires once per `delayMs` window, which bounds
 * the request rate at 1000/delayMs per second (2.5/s at the default 400 ms).
 */
export class Debouncer {
  private timer: ReturnType<typeof setTimeout> | null = null;
  private deadline: number | null = null;

  constructor(
    private delayMs = 400,
    private now: () => number = () => Date.now(),
  ) {}

  schedule(op: () => void): void {
    if (this.timer !== null) clearTimeout(this.timer);
    if (this.deadline === null) this.deadline = this.now() + this.delayMs;
    const wait = Math.max(0, Math.min(this.delayMs, this.deadline - this.now()));
    this.timer = setTimeout(() => {
      this.timer = null;
      this.deadline = null;
      op();
    }, wait);
  }

  cancel(): void {
    if (this.timer !== null) clearTimeout(this.timer);
    this.timer = null;
    this.deadline = null;
  }
}
