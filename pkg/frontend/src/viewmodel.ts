import { redRamp, WHITE_SPACE_GRAY } from "./color.js";
import type {
  FieldPanelPayload,
  IdeaRecordPayload,
  MapPayload,
  NearbyEntry,
  PositionPayload,
} from "./types.js";

/** Everything the renderer needs for one node. All numbers except the
 * purely visual radius/fill derivations are verbatim payload values. */
export interface NodeView {
  code: string;
  x: number;
  y: number;
  radius: number;
  fill: string;
  red: boolean;
  /** query-matching patent count from /position (0 for white space) */
  xCount: number;
  patentCount: number;
  highlighted: boolean;
}

export interface EdgeView {
  a: string;
  b: string;
  phi: number;
  reason: string;
  ax: number;
  ay: number;
  bx: number;
  by: number;
}

export interface MapViewModel {
  level: number;
  nodes: NodeView[];
  edges: EdgeView[];
  highlightedFields: string[];
}

const MIN_RADIUS = 4;
const MAX_RADIUS = 16;

function nodeRadius(patentCount: number, maxCount: number): number {
  if (maxCount <= 0) return MIN_RADIUS;
  const t = Math.sqrt(patentCount / maxCount); // area tracks patent count
  return MIN_RADIUS + (MAX_RADIUS - MIN_RADIUS) * t;
}

/** Slider semantics: the top-k prefix of the nearby ranking. Increasing
 * k can only add highlights because the ranking is a fixed ordering. */
export function highlightSet(entries: NearbyEntry[] | null, sliderK: number): string[] {
  if (!entries || sliderK <= 0) return [];
  return entries.slice(0, sliderK).map((e) => e.field);
}

export function buildMapViewModel(
  map: MapPayload,
  position: PositionPayload | null,
  nearbyEntries: NearbyEntry[] | null,
  sliderK: number,
): MapViewModel {
  const red = new Set(position ? position.red_fields : []);
  const counts = position ? position.x : {};
  const maxX = Math.max(0, ...Object.values(counts));
  const maxPatents = Math.max(0, ...map.nodes.map(([, count]) => count));
  const highlighted = new Set(highlightSet(nearbyEntries, sliderK));

  const views = new Map<string, NodeView>();
  for (const [code, patentCount, x, y] of map.nodes) {
    const xCount = counts[code] ?? 0;
    views.set(code, {
      code,
      x,
      y,
      radius: nodeRadius(patentCount, maxPatents),
      fill: red.has(code) ? redRamp(xCount, maxX) : WHITE_SPACE_GRAY,
      red: red.has(code),
      xCount,
      patentCount,
      highlighted: highlighted.has(code),
    });
  }

  const edges: EdgeView[] = [];
  for (const [a, b, phi, reason] of map.edges) {
    const va = views.get(a);
    const vb = views.get(b);
    if (!va || !vb) continue;
    edges.push({ a, b, phi, reason, ax: va.x, ay: va.y, bx: vb.x, by: vb.y });
  }

  return {
    level: map.level,
    nodes: [...views.values()],
    edges,
    highlightedFields: [...highlighted],
  };
}

export interface PanelViewModel {
  field: string;
  filteredByQuery: boolean;
  patentTotal: number;
  terms: { term: string; score: number }[];
  byCitations: { id: string; title: string; citations: number }[];
  byRecency: { id: string; title: string; grantDate: string }[];
  inventors: { name: string; count: number }[];
  assignees: { name: string; count: number }[];
}

export function buildPanelViewModel(panel: FieldPanelPayload): PanelViewModel {
  return {
    field: panel.field,
    filteredByQuery: panel.stimulus_scope === "query-filtered",
    patentTotal: panel.scope_ids.length,
    terms: panel.top_terms.map(([term, score]) => ({ term, score })),
    byCitations: panel.patents_by_citations.map(([id, title, citations]) => ({
      id,
      title,
      citations,
    })),
    byRecency: panel.patents_by_recency.map(([id, title, grantDate]) => ({
      id,
      title,
      grantDate,
    })),
    inventors: panel.top_inventors.map(([name, count]) => ({ name, count })),
    assignees: panel.top_assignees.map(([name, count]) => ({ name, count })),
  };
}

export interface LedgerRowView {
  ideaId: string;
  ideaText: string;
  heuristic: string;
  sourceField: string;
  stimulusText: string;
  /** verbatim service value; the UI never recomputes proximities */
  omega: number;
  omegaLabel: string;
}

export function buildLedgerView(records: IdeaRecordPayload[]): LedgerRowView[] {
  // rows keep the order the service returned (ranking belongs to the service)
  return records.map((r) => ({
    ideaId: r.idea_id,
    ideaText: r.idea_text,
    heuristic: r.heuristic,
    sourceField: r.source_field,
    stimulusText: r.stimulus_text,
    omega: r.omega,
    omegaLabel: r.omega.toFixed(6),
  }));
}
