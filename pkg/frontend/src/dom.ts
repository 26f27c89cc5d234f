// Thin DOM painter over the pure view models. All figures arrive as
// preformatted strings from view.ts.

import type {
  CoreOption,
  FrameOption,
  RankingView,
  SessionView,
} from "./view";

function el(tag: string, className?: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  if (className) {
    node.className = className;
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

export function renderBanner(root: HTMLElement, message: string | null,
                             onDismiss: () => void): void {
  root.innerHTML = "";
  if (!message) {
    return;
  }
  const banner = el("div", "banner", message);
  const dismiss = el("button", "banner-dismiss", "dismiss");
  dismiss.addEventListener("click", onDismiss);
  banner.appendChild(dismiss);
  root.appendChild(banner);
}

export function renderFramePicker(root: HTMLElement, options: FrameOption[],
                                  onPick: (ids: string[]) => void): void {
  root.innerHTML = "";
  root.appendChild(el("h2", undefined, "1. Pick a method frame"));
  const list = el("div", "frame-list");
  for (const option of options) {
    const button = el("button", "frame-option");
    button.appendChild(el("span", "frame-title", option.title));
    button.appendChild(el("span", "frame-meta",
      `agreement ${option.supportText} (n=${option.countText}, ${option.sourceTag})`));
    button.addEventListener("click", () => onPick(option.ids));
    list.appendChild(button);
  }
  root.appendChild(list);
}

export function renderCorePicker(root: HTMLElement, options: CoreOption[],
                                 selected: string[] | null,
                                 onPick: (ids: string[] | null) => void): void {
  root.innerHTML = "";
  if (options.length === 0) {
    return;
  }
  root.appendChild(el("h2", undefined, "Optional: anchor a practice core"));
  const list = el("div", "frame-list");
  const none = document.createElement("button");
  none.className = selected === null ? "frame-option selected" : "frame-option";
  none.appendChild(el("span", "frame-title", "No core"));
  none.addEventListener("click", () => onPick(null));
  list.appendChild(none);
  for (const option of options) {
    const key = option.ids.join(",");
    const active = selected !== null && selected.join(",") === key;
    const button = document.createElement("button");
    button.className = active ? "frame-option selected" : "frame-option";
    button.appendChild(el("span", "frame-title", option.title));
    button.appendChild(el("span", "frame-meta",
      `agreement ${option.supportText} (n=${option.countText})`));
    button.addEventListener("click", () => onPick(option.ids));
    list.appendChild(button);
  }
  root.appendChild(list);
}

export function renderSession(root: HTMLElement, view: SessionView | null,
                              busy: boolean,
                              onAdd: (id: string) => void,
                              onRemove: (id: string) => void): void {
  root.innerHTML = "";
  if (!view) {
    return;
  }
  const header = el("div", "session-header");
  header.appendChild(el("h2", undefined, `2. Build on ${view.frameTitle}`));
  header.appendChild(el("p", "session-meta",
    `${view.filterLabel} · n=${view.subsetN} · threshold ${view.thresholdText} · ` +
    `set size ${view.setSizeText}`));
  root.appendChild(header);

  const gauge = el("div", "gauge");
  gauge.appendChild(el("span", "gauge-label", "minimal agreement"));
  gauge.appendChild(el("strong", "gauge-value", view.minAgreementText));
  if (view.interval) {
    gauge.appendChild(el("span", "gauge-interval",
      `interval [${view.interval.lowerText}, ${view.interval.upperText}]`));
  }
  root.appendChild(gauge);

  const chosen = el("div", "chosen-panel");
  chosen.appendChild(el("h3", undefined, "Chosen practices"));
  for (const entry of view.chosen) {
    const row = el("div", "chosen-row");
    row.appendChild(el("span", "chosen-label",
      entry.isCore ? `${entry.label} (core)` : entry.label));
    row.appendChild(el("span", "badge", entry.agreementBadge));
    if (!entry.isCore) {
      const remove = document.createElement("button");
      remove.className = "remove";
      remove.textContent = "✕";
      remove.disabled = busy;
      remove.addEventListener("click", () => onRemove(entry.id));
      row.appendChild(remove);
    }
    chosen.appendChild(row);
  }
  root.appendChild(chosen);

  const candidates = el("div", "candidate-panel");
  candidates.appendChild(el("h3", undefined, "Ranked candidates"));
  for (const candidate of view.candidates) {
    const row = document.createElement("button");
    row.className = candidate.greyed ? "candidate greyed" : "candidate";
    row.appendChild(el("span", "candidate-rank", `#${candidate.rank}`));
    row.appendChild(el("span", "candidate-label", candidate.label));
    row.appendChild(el("span", "badge", candidate.agreementBadge));
    row.disabled = busy || candidate.greyed;
    row.addEventListener("click", () => onAdd(candidate.id));
    candidates.appendChild(row);
  }
  root.appendChild(candidates);
}

export function renderRanking(root: HTMLElement, view: RankingView | null): void {
  root.innerHTML = "";
  if (!view) {
    return;
  }
  root.appendChild(el("h3", undefined,
    `Process variants by set size (n=${view.subsetN})`));
  const table = el("table", "ranking-table");
  for (const size of view.sizes) {
    const header = el("tr", "ranking-size");
    const cell = el("td", undefined,
      `set size ${size.setSize} — ${size.variantCount} variants`);
    cell.setAttribute("colspan", "3");
    header.appendChild(cell);
    table.appendChild(header);
    for (const row of size.rows) {
      const tr = el("tr");
      tr.appendChild(el("td", undefined, row.label));
      tr.appendChild(el("td", "ranking-index", String(row.firstIndex)));
      tr.appendChild(el("td", "ranking-agreement", row.agreementText));
      table.appendChild(tr);
    }
  }
  root.appendChild(table);
}
