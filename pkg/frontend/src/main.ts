import { ScoreClient } from "./api.js";
import { highlightDrivers, type HintEntry } from "./drivers.js";
import {
  renderBanner,
  renderContributions,
  renderDrivers,
  renderGauge,
  renderSparkline,
} from "./render.js";
import { EditorSession } from "./session.js";
import type { Settings } from "./types.js";

async function loadJson<T>(url: string): Promise<T> {
  const response = await fetch(url);
  if (!response.ok) throw new Error(`cannot load ${url}`);
  return response.json();
}

function element(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

async function boot(): Promise<void> {
  const settings = await loadJson<Settings>("./settings.json");
  const hints = await loadJson<Record<string, HintEntry>>("./hints.json");
  const client = new ScoreClient(settings.serviceUrl);
  const session = new EditorSession(client, { targetGrade: settings.targetGrade });

  const editor = element("editor") as HTMLTextAreaElement;
  const gauge = element("gauge");
  const banner = element("banner");
  const contributions = element("contributions");
  const drivers = element("drivers");
  const sparkline = element("sparkline");
  const target = element("target-grade") as HTMLInputElement;
  target.value = String(session.targetGrade);

  const redraw = () => {
    const response = session.lastResponse;
    gauge.innerHTML = renderGauge(response, session.targetGrade);
    banner.innerHTML = renderBanner(
      session.serviceDown,
      response ? response.warnings : [],
    );
    contributions.innerHTML = renderContributions(response);
    drivers.innerHTML = response
      ? renderDrivers(highlightDrivers(response, hints))
      : "";
    sparkline.innerHTML = renderSparkline(session.history);
  };

  session.onChange(redraw);
  editor.addEventListener("input", () => session.setText(editor.value));
  target.addEventListener("change", () => {
    const parsed = Number(target.value);
    if (Number.isFinite(parsed)) session.targetGrade = parsed;
    redraw();
  });
  redraw();

  try {
    const info = await client.modelInfo();
    element("model-line").textContent =
      `model ${info.modelId} · features: ${info.subset.join(", ")}` +
      (info.capabilities.parser ? "" : " · no parser: parse features unavailable");
  } catch {
    element("model-line").textContent = "service unreachable";
  }
}

void boot();
