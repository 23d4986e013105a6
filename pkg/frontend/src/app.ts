/** Assembles the page and wires user actions to the search service.
 *
 * Every query change (icon confirmed or removed, text added or removed)
 * issues exactly one search carrying the full current query; an emptied
 * query clears the grid locally instead of asking the server to rank
 * nothing.
 */

import { ApiClient, Prediction, ResultRow, ScreenMeta } from "./api.js";
import { SketchPad } from "./canvas.js";
import { SessionStore } from "./state.js";
import { POSITIONAL_PREFIXES } from "./zones.js";

const SKELETON = `
  <header class="topbar">
    <h1>screenseek</h1>
    <span id="health"></span>
  </header>
  <div class="layout">
    <aside class="panel query-panel">
      <h2>Sketch an element</h2>
      <canvas id="sketch" width="360" height="640"></canvas>
      <div id="predictions" class="chips"></div>
      <div class="actions">
        <button id="icon-done" disabled>Icon done</button>
        <button id="clear-sketch">Clear sketch</button>
      </div>
      <h2>Query</h2>
      <div id="icon-chips" class="chips"></div>
      <form id="text-form">
        <input id="text-input" placeholder="e.g. settings or tl:settings" autocomplete="off" />
        <button type="submit">Add text</button>
      </form>
      <div id="text-chips" class="chips"></div>
      <p id="message" class="message"></p>
    </aside>
    <main class="panel results-panel">
      <div id="results-status" class="status"></div>
      <div id="results-grid" class="grid"></div>
    </main>
    <aside class="panel side-panel">
      <div id="detail"></div>
      <div id="cheatsheet"></div>
    </aside>
  </div>
`;

export interface AppHandles {
  store: SessionStore;
  pad: SketchPad;
}

export function initApp(root: HTMLElement, api: ApiClient): AppHandles {
  root.innerHTML = SKELETON;
  const el = <T extends HTMLElement>(id: string) => root.querySelector<T>(`#${id}`)!;

  const store = new SessionStore();
  const pad = new SketchPad(el<HTMLCanvasElement>("sketch"));
  const predictionsBox = el("predictions");
  const iconDone = el<HTMLButtonElement>("icon-done");
  const iconChips = el("icon-chips");
  const textForm = el<HTMLFormElement>("text-form");
  const textInput = el<HTMLInputElement>("text-input");
  const textChips = el("text-chips");
  const message = el("message");
  const status = el("results-status");
  const grid = el("results-grid");
  const detail = el("detail");

  let lastRankMs: number | null = null;

  function showMessage(text: string): void {
    message.textContent = text;
  }

  function chip(label: string, onRemove: () => void): HTMLElement {
    const span = document.createElement("span");
    span.className = "chip";
    span.textContent = label;
    const remove = document.createElement("button");
    remove.type = "button";
    remove.className = "chip-remove";
    remove.textContent = "×";
    remove.addEventListener("click", onRemove);
    span.appendChild(remove);
    return span;
  }

  function renderPredictions(): void {
    predictionsBox.replaceChildren();
    store.predictions.forEach((p: Prediction, i: number) => {
      const btn = document.createElement("button");
      btn.type = "button";
      btn.className = "prediction" + (i === store.selected ? " selected" : "");
      btn.textContent = `${p.icon_class} ${(p.confidence * 100).toFixed(0)}%`;
      btn.addEventListener("click", () => {
        store.selectPrediction(i);
        renderPredictions();
      });
      predictionsBox.appendChild(btn);
    });
    iconDone.disabled = store.strokes.length === 0 || store.predictions.length === 0;
  }

  function renderIconChips(): void {
    iconChips.replaceChildren();
    store.icons.forEach((icon, i) => {
      iconChips.appendChild(
        chip(icon.iconClass, () => {
          store.removeIcon(i);
          renderIconChips();
          pad.paint(store.strokes, store.icons);
          void refreshResults();
        }),
      );
    });
  }

  function renderTextChips(): void {
    textChips.replaceChildren();
    store.texts.forEach((text, i) => {
      textChips.appendChild(
        chip(text, () => {
          store.removeText(i);
          renderTextChips();
          void refreshResults();
        }),
      );
    });
  }

  function renderResults(): void {
    grid.replaceChildren();
    if (store.results === null) {
      status.textContent = "Draw an icon or add a text query to search.";
      return;
    }
    if (store.results.length === 0) {
      status.textContent = "No screens matched this query.";
      return;
    }
    const timing = lastRankMs === null ? "" : ` · ranked in ${lastRankMs} ms`;
    status.textContent = `Top ${store.results.length} results${timing}`;
    for (const row of store.results) {
      grid.appendChild(resultCard(row));
    }
  }

  function resultCard(row: ResultRow): HTMLElement {
    const card = document.createElement("button");
    card.type = "button";
    card.className = "result-card";
    card.dataset.id = row.screen_id;
    const rank = document.createElement("span");
    rank.className = "rank";
    rank.textContent = `#${row.rank}`;
    const id = document.createElement("span");
    id.className = "screen-id";
    id.textContent = row.screen_id;
    const score = document.createElement("span");
    score.className = "score";
    score.textContent = row.score.toFixed(3);
    card.append(rank, id, score);
    card.addEventListener("click", () => void openDetail(row.screen_id));
    return card;
  }

  async function openDetail(id: string): Promise<void> {
    try {
      renderDetail(await api.screen(id));
    } catch (err) {
      showMessage(errorText(err));
    }
  }

  function renderDetail(meta: ScreenMeta): void {
    detail.replaceChildren();
    const head = document.createElement("h2");
    head.textContent = `${meta.id} · ${meta.width}×${meta.height}px`;
    detail.appendChild(head);
    detail.appendChild(wireframe(meta));
  }

  /** Outline boxes stand in for screenshots the corpus does not ship. */
  function wireframe(meta: ScreenMeta): SVGSVGElement {
    const NS = "http://www.w3.org/2000/svg";
    const svg = document.createElementNS(NS, "svg");
    svg.setAttribute("viewBox", `0 0 ${meta.width} ${meta.height}`);
    svg.setAttribute("class", "wireframe");
    const box = (bbox: number[], cls: string, label: string) => {
      const [l, t, r, b] = bbox;
      const rect = document.createElementNS(NS, "rect");
      rect.setAttribute("x", String(l * meta.width));
      rect.setAttribute("y", String(t * meta.height));
      rect.setAttribute("width", String(Math.max(1, (r - l) * meta.width)));
      rect.setAttribute("height", String(Math.max(1, (b - t) * meta.height)));
      rect.setAttribute("class", cls);
      svg.appendChild(rect);
      if (label) {
        const text = document.createElementNS(NS, "text");
        text.setAttribute("x", String(l * meta.width + 8));
        text.setAttribute("y", String(t * meta.height + 40));
        text.textContent = label;
        svg.appendChild(text);
      }
    };
    for (const icon of meta.icons) box(icon.bbox, "icon-box", icon.label);
    for (const item of meta.texts) box(item.bbox, "text-box", item.text);
    return svg;
  }

  function renderCheatsheet(classes: string[]): void {
    const sheet = el("cheatsheet");
    sheet.replaceChildren();
    const head = document.createElement("h2");
    head.textContent = "Cheat sheet";
    const classHead = document.createElement("h3");
    classHead.textContent = `Icon classes (${classes.length})`;
    const classList = document.createElement("p");
    classList.className = "class-list";
    classList.textContent = classes.join(", ");
    const prefixHead = document.createElement("h3");
    prefixHead.textContent = "Positional prefixes";
    const prefixList = document.createElement("ul");
    prefixList.className = "prefix-list";
    for (const [prefix, zone] of POSITIONAL_PREFIXES) {
      const item = document.createElement("li");
      item.textContent = `${prefix}: → ${zone}`;
      prefixList.appendChild(item);
    }
    sheet.append(head, classHead, classList, prefixHead, prefixList);
  }

  async function recognize(): Promise<void> {
    const seq = store.beginRecognize();
    try {
      const resp = await api.recognize(store.strokes);
      if (store.acceptRecognize(seq, resp.predictions)) renderPredictions();
    } catch (err) {
      showMessage(errorText(err));
    }
  }

  async function refreshResults(): Promise<void> {
    if (!store.hasQuery()) {
      store.invalidateSearch();
      store.results = null;
      lastRankMs = null;
      renderResults();
      return;
    }
    const seq = store.beginSearch();
    const { icons, texts } = store.query();
    try {
      const resp = await api.search(icons, texts);
      if (store.acceptSearch(seq, resp.results)) {
        lastRankMs = resp.timing.rank_ms;
        renderResults();
      }
    } catch (err) {
      showMessage(errorText(err));
    }
  }

  pad.onStroke = (stroke) => {
    showMessage("");
    store.addStroke(stroke);
    pad.paint(store.strokes, store.icons);
    renderPredictions();
    void recognize();
  };

  iconDone.addEventListener("click", () => {
    const icon = store.confirmIcon();
    if (icon === null) return;
    showMessage("");
    renderPredictions();
    renderIconChips();
    pad.paint(store.strokes, store.icons);
    void refreshResults();
  });

  el("clear-sketch").addEventListener("click", () => {
    store.clearSketch();
    renderPredictions();
    pad.paint(store.strokes, store.icons);
  });

  textForm.addEventListener("submit", (e) => {
    e.preventDefault();
    const problem = store.addText(textInput.value);
    if (problem !== null) {
      showMessage(problem);
      return;
    }
    showMessage("");
    textInput.value = "";
    renderTextChips();
    void refreshResults();
  });

  renderPredictions();
  renderResults();
  void api
    .health()
    .then((h) => {
      el("health").textContent = `${h.screens} screens · ${h.classes} icon classes`;
    })
    .catch(() => {
      el("health").textContent = "service unreachable";
    });
  void api
    .classes()
    .then(renderCheatsheet)
    .catch(() => renderCheatsheet([]));

  return { store, pad };
}

function errorText(err: unknown): string {
  return err instanceof Error ? err.message : String(err);
}
