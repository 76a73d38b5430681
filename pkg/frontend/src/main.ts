import { ApiError, AtlasClient } from "./api.js";
import { toDraftBody, validateIdeaForm } from "./ideas.js";
import { attachInteraction, drawMap, fitCamera, pickNode } from "./render.js";
import type { Camera } from "./render.js";
import { clampSliderK, initialState, LatestWins, reconcileSelection } from "./state.js";
import type { ViewState } from "./state.js";
import {
  buildLedgerView,
  buildMapViewModel,
  buildPanelViewModel,
} from "./viewmodel.js";
import type { MapViewModel } from "./viewmodel.js";
import type {
  Level,
  MapPayload,
  NearbyEntry,
  PositionPayload,
} from "./types.js";

/** API base: same origin by default, ?api=http://host:port to override. */
function apiBase(): string {
  const override = new URLSearchParams(window.location.search).get("api");
  return override ? override.replace(/\/$/, "") : "";
}

const client = new AtlasClient(apiBase());
const guard = new LatestWins();

let state: ViewState = { ...initialState };
let mapPayload: MapPayload | null = null;
let positionPayload: PositionPayload | null = null;
let nearbyEntries: NearbyEntry[] | null = null;
let vm: MapViewModel | null = null;
let camera: Camera | null = null;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

const canvas = el<HTMLCanvasElement>("map-canvas");
const errorBanner = el<HTMLDivElement>("error-banner");

function showError(message: string): void {
  errorBanner.textContent = message;
  errorBanner.hidden = false;
  const ctx = canvas.getContext("2d");
  if (ctx) ctx.clearRect(0, 0, canvas.width, canvas.height); // no stale map
}

function clearError(): void {
  errorBanner.hidden = true;
}

function redraw(): void {
  if (!mapPayload) return;
  vm = buildMapViewModel(mapPayload, positionPayload, nearbyEntries, state.sliderK);
  if (!camera) camera = fitCamera(canvas.width, canvas.height);
  const ctx = canvas.getContext("2d");
  if (ctx) drawMap(ctx, vm, camera, canvas.width, canvas.height, state.selectedField);
}

async function loadMap(): Promise<void> {
  const token = guard.begin("map");
  try {
    const payload = await client.map(state.level);
    if (!guard.isCurrent("map", token)) return;
    mapPayload = payload;
    state = reconcileSelection(state, new Set(payload.nodes.map(([code]) => code)));
    clearError();
    redraw();
  } catch (err) {
    showError(`map unavailable: ${String(err)}`);
  }
}

async function runQuery(): Promise<void> {
  const query = el<HTMLInputElement>("query-input").value;
  const token = guard.begin("query");
  if (!query.trim()) {
    positionPayload = null;
    nearbyEntries = null;
    redraw();
    return;
  }
  try {
    const position = await client.position(query, state.level);
    if (!guard.isCurrent("query", token)) return;
    positionPayload = position;
    state = { ...state, query };
    el<HTMLSpanElement>("match-count").textContent =
      `${position.match_count} matching patents, ${position.red_fields.length} red fields`;
    if (!position.unpositioned) {
      const nearby = await client.nearby(query, state.level, position.white_fields.length);
      if (!guard.isCurrent("query", token)) return;
      nearbyEntries = nearby.entries;
    } else {
      nearbyEntries = null;
    }
    const slider = el<HTMLInputElement>("nearby-slider");
    slider.max = String(position.white_fields.length);
    state = { ...state, sliderK: clampSliderK(state.sliderK, position.white_fields.length) };
    el<HTMLInputElement>("idea-target").value = query;
    clearError();
    redraw();
  } catch (err) {
    showError(`query failed: ${String(err)}`);
  }
}

async function openPanel(code: string): Promise<void> {
  const token = guard.begin("panel");
  state = { ...state, selectedField: code };
  redraw();
  try {
    const panel = await client.fieldPanel(
      code,
      positionPayload && !positionPayload.unpositioned
        ? { q: positionPayload.query }
        : {},
    );
    if (!guard.isCurrent("panel", token)) return;
    const view = buildPanelViewModel(panel);
    el<HTMLElement>("panel-title").textContent = view.field;
    el<HTMLElement>("panel-badge").hidden = !view.filteredByQuery;
    el<HTMLElement>("panel-count").textContent = `${view.patentTotal} patents in scope`;
    renderList("panel-terms", view.terms.map((t) => `${t.score}  ${t.term}`));
    renderPatentList("panel-cited", view.byCitations.map((p) => ({
      id: p.id, label: `${p.citations} citations  ${p.title}`,
    })));
    renderPatentList("panel-recent", view.byRecency.map((p) => ({
      id: p.id, label: `${p.grantDate}  ${p.title}`,
    })));
    renderList("panel-inventors", view.inventors.map((a) => `${a.count}  ${a.name}`));
    renderList("panel-assignees", view.assignees.map((a) => `${a.count}  ${a.name}`));
    el<HTMLInputElement>("idea-source").value = code;
    clearError();
  } catch (err) {
    showError(`panel failed: ${String(err)}`);
  }
}

function renderList(id: string, rows: string[]): void {
  const list = el<HTMLUListElement>(id);
  list.replaceChildren(
    ...rows.map((row) => {
      const item = document.createElement("li");
      item.textContent = row;
      return item;
    }),
  );
}

function renderPatentList(id: string, rows: { id: string; label: string }[]): void {
  const list = el<HTMLUListElement>(id);
  list.replaceChildren(
    ...rows.map((row) => {
      const item = document.createElement("li");
      const link = document.createElement("a");
      link.href = "#";
      link.textContent = row.label;
      link.addEventListener("click", (ev) => {
        ev.preventDefault();
        void showPatent(row.id);
      });
      item.append(link);
      return item;
    }),
  );
}

async function showPatent(id: string): Promise<void> {
  try {
    const record = await client.patent(id);
    el<HTMLElement>("patent-detail").textContent =
      `${record.id}  (${record.grant_date}, cited ${record.citation_count}x)\n` +
      `${record.title}\n${record.ipc.join(", ")}\n\n${record.abstract}`;
  } catch (err) {
    showError(`patent failed: ${String(err)}`);
  }
}

async function refreshLedger(): Promise<void> {
  const token = guard.begin("ledger");
  try {
    const records = await client.ideas(state.ideaOrder);
    if (!guard.isCurrent("ledger", token)) return;
    renderList(
      "ledger-list",
      buildLedgerView(records).map(
        (row) => `${row.omegaLabel}  [${row.sourceField}] ${row.ideaText}`,
      ),
    );
  } catch (err) {
    showError(`ledger failed: ${String(err)}`);
  }
}

function ideaFormInput() {
  return {
    heuristic: el<HTMLSelectElement>("idea-heuristic").value,
    stimulusText: el<HTMLInputElement>("idea-stimulus").value,
    stimulusKind: el<HTMLSelectElement>("idea-kind").value,
    sourceField: el<HTMLInputElement>("idea-source").value,
    targetQuery: el<HTMLInputElement>("idea-target").value,
    ideaText: el<HTMLTextAreaElement>("idea-text").value,
  };
}

async function updateTemplatePreview(): Promise<void> {
  const form = ideaFormInput();
  const preview = el<HTMLElement>("idea-preview");
  if (!form.stimulusText.trim() || !form.targetQuery.trim()) {
    preview.textContent = "";
    return;
  }
  const token = guard.begin("preview");
  try {
    const rendered = await client.renderIdea(
      form.heuristic, form.stimulusText, form.targetQuery,
    );
    if (guard.isCurrent("preview", token)) preview.textContent = rendered.sentence;
  } catch {
    preview.textContent = "";
  }
}

async function submitIdea(): Promise<void> {
  const form = ideaFormInput();
  const errors = validateIdeaForm(form);
  const errorNode = el<HTMLElement>("idea-errors");
  if (errors.length > 0) {
    errorNode.textContent = errors.join("; ");
    return; // inline validation: nothing is sent
  }
  errorNode.textContent = "";
  try {
    await client.postIdea(toDraftBody(form));
    el<HTMLTextAreaElement>("idea-text").value = "";
    await refreshLedger();
  } catch (err) {
    errorNode.textContent =
      err instanceof ApiError ? err.message : `submit failed: ${String(err)}`;
  }
}

function wire(): void {
  el<HTMLFormElement>("query-form").addEventListener("submit", (ev) => {
    ev.preventDefault();
    void runQuery();
  });
  for (const level of [3, 4] as Level[]) {
    el<HTMLButtonElement>(`level-${level}`).addEventListener("click", () => {
      state = { ...state, level };
      camera = null;
      void loadMap().then(() => (state.query ? runQuery() : undefined));
    });
  }
  el<HTMLInputElement>("nearby-slider").addEventListener("input", (ev) => {
    const raw = Number((ev.target as HTMLInputElement).value);
    const whiteCount = positionPayload ? positionPayload.white_fields.length : 0;
    state = { ...state, sliderK: clampSliderK(raw, whiteCount) };
    el<HTMLElement>("slider-value").textContent = String(state.sliderK);
    redraw();
  });
  el<HTMLSelectElement>("ledger-order").addEventListener("change", (ev) => {
    state = {
      ...state,
      ideaOrder: (ev.target as HTMLSelectElement).value as ViewState["ideaOrder"],
    };
    void refreshLedger();
  });
  el<HTMLFormElement>("idea-form").addEventListener("submit", (ev) => {
    ev.preventDefault();
    void submitIdea();
  });
  for (const id of ["idea-heuristic", "idea-stimulus"]) {
    el<HTMLElement>(id).addEventListener("input", () => void updateTemplatePreview());
  }

  attachInteraction(
    canvas,
    () => camera ?? fitCamera(canvas.width, canvas.height),
    (cam) => {
      camera = cam;
      redraw();
    },
    (px, py) => {
      if (!vm || !camera) return;
      const hit = pickNode(vm, camera, px, py);
      if (hit) void openPanel(hit.code);
    },
  );
}

wire();
void loadMap().then(() => refreshLedger());
