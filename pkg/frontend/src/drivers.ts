import type { ScoreResponse } from "./types.js";

export interface HintEntry {
  hint: string;
  treeDependent?: boolean;
}

export interface DriverItem {
  name: string;
  contribution: number;
  hint: string;
  masked: boolean;
}

export interface DriverView {
  kind: "drivers" | "nearIntercept";
  items: DriverItem[];
}

const NEAR_ZERO = 1e-6;
const MASK_MARKER = "masked";

/** Pick the top positive score drivers and attach plain-language hints.
 *
 * Hints are data driven (hints.json); unmapped features fall back to a
 * generic message. When the service warns that parse features are masked,
 * tree-dependent entries are marked so the view can grey them out. If no
 * contribution is meaningfully nonzero the view collapses to a
 * near-intercept message.
 */
export function highlightDrivers(
  response: ScoreResponse,
  hints: Record<string, HintEntry>,
  top = 3,
): DriverView {
  const parseMasked = response.warnings.some((w) =>
    w.toLowerCase().includes(MASK_MARKER),
  );
  if (response.features.every((f) => Math.abs(f.contribution) < NEAR_ZERO)) {
    return { kind: "nearIntercept", items: [] };
  }
  const items = response.features
    .filter((f) => f.contribution > 0)
    .sort((a, b) => b.contribution - a.contribution)
    .slice(0, top)
    .map((f) => {
      const entry = hints[f.name];
      return {
        name: f.name,
        contribution: f.contribution,
        hint: entry ? entry.hint : "this feature pushes the estimated grade up",
        masked: parseMasked && Boolean(entry?.treeDependent),
      };
    });
  return { kind: "drivers", items };
}
