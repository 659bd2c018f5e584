import type { DriverView } from "./drivers.js";
import type { HistoryPoint, ScoreResponse } from "./types.js";

/** Pure HTML/SVG builders so rendering is testable without a DOM. */

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderGauge(
  response: ScoreResponse | null,
  targetGrade: number,
): string {
  if (response === null) {
    return `<div class="gauge empty">type to score</div>`;
  }
  const level = response.level === null ? "?" : String(response.level);
  const onTarget =
    response.level !== null && response.level === targetGrade ? " on-target" : "";
  return (
    `<div class="gauge${onTarget}">` +
    `<span class="level" data-level="${level}">${level}</span>` +
    `<span class="score">score ${response.score.toFixed(2)}</span>` +
    `<span class="target">target ${targetGrade}</span>` +
    `</div>`
  );
}

export function renderContributions(response: ScoreResponse | null): string {
  if (response === null || response.features.length === 0) return "";
  const biggest = Math.max(
    ...response.features.map((f) => Math.abs(f.contribution)),
    1e-9,
  );
  const bars = response.features
    .slice()
    .sort((a, b) => Math.abs(b.contribution) - Math.abs(a.contribution))
    .map((f) => {
      const width = Math.round((Math.abs(f.contribution) / biggest) * 100);
      const sign = f.contribution >= 0 ? "pos" : "neg";
      return (
        `<li class="bar ${sign}" title="value ${f.value} x coef ${f.coefficient}">` +
        `<span class="name">${escapeHtml(f.name)}</span>` +
        `<span class="track"><span class="fill" style="width:${width}%"></span></span>` +
        `<span class="amount">${f.contribution.toFixed(3)}</span>` +
        `</li>`
      );
    });
  return `<ul class="contributions">${bars.join("")}</ul>`;
}

export function renderDrivers(view: DriverView): string {
  if (view.kind === "nearIntercept") {
    return `<p class="drivers near-intercept">score sits near the model intercept; no single feature dominates</p>`;
  }
  const rows = view.items.map((item) => {
    const cls = item.masked ? "driver masked" : "driver";
    const tooltip = item.masked
      ? ` title="computed without parse trees; value may be incomplete"`
      : "";
    return (
      `<li class="${cls}"${tooltip}>` +
      `<strong>${escapeHtml(item.name)}</strong> ${escapeHtml(item.hint)}` +
      `</li>`
    );
  });
  return `<ul class="drivers">${rows.join("")}</ul>`;
}

export function renderBanner(serviceDown: boolean, warnings: string[]): string {
  const parts: string[] = [];
  if (serviceDown) {
    parts.push(
      `<div class="banner outage">scoring service unreachable; showing the last result</div>`,
    );
  }
  for (const warning of warnings) {
    parts.push(`<div class="banner warning">${escapeHtml(warning)}</div>`);
  }
  return parts.join("");
}

export function renderSparkline(
  history: HistoryPoint[],
  width = 220,
  height = 48,
): string {
  if (history.length === 0) return "";
  const scores = history.map((p) => p.score);
  const low = Math.min(...scores);
  const high = Math.max(...scores);
  const span = high - low || 1;
  const step = history.length > 1 ? width / (history.length - 1) : 0;
  const points = scores
    .map((s, i) => {
      const x = (i * step).toFixed(1);
      const y = (height - ((s - low) / span) * (height - 4) - 2).toFixed(1);
      return `${x},${y}`;
    })
    .join(" ");
  return (
    `<svg class="sparkline" viewBox="0 0 ${width} ${height}" ` +
    `preserveAspectRatio="none"><polyline fill="none" points="${points}"/></svg>`
  );
}
