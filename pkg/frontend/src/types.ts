/** Wire types for the techatlas service. Field names mirror the JSON bodies. */

export type Level = 3 | 4;

export interface MapPayload {
  level: number;
  seed: number;
  iterations: number;
  generator: string;
  /** [code, patent_count, x, y] with x, y in the unit square */
  nodes: [string, number, number, number][];
  /** [a, b, phi, reason] */
  edges: [string, string, number, string][];
}

export interface PositionPayload {
  query: string;
  level: number;
  match_count: number;
  matched_ids: string[];
  /** field code -> count of query-matching patents (sparse, nonzero only) */
  x: Record<string, number>;
  red_fields: string[];
  white_fields: string[];
  unpositioned: boolean;
}

export interface NearbyEntry {
  field: string;
  omega: number;
}

export interface NearbyPayload {
  query: string;
  level: number;
  entries: NearbyEntry[];
}

export interface FieldPanelPayload {
  field: string;
  stimulus_scope: "all-field-patents" | "query-filtered";
  scope_ids: string[];
  top_terms: [string, number][];
  patents_by_citations: [string, string, number][];
  patents_by_recency: [string, string, string][];
  top_inventors: [string, number][];
  top_assignees: [string, number][];
}

export interface PatentPayload {
  id: string;
  title: string;
  abstract: string;
  grant_date: string;
  ipc: string[];
  cited: string[];
  inventors: string[];
  assignees: string[];
  citation_count: number;
}

export type Heuristic = "combination" | "analogy";
export type StimulusKind = "term" | "document" | "field";
export type IdeaOrder = "proximity_desc" | "proximity_asc";

export interface IdeaDraftBody {
  heuristic: Heuristic;
  stimulus_text: string;
  stimulus_kind: StimulusKind;
  source_field: string;
  target_query: string;
  idea_text: string;
}

export interface IdeaRecordPayload extends IdeaDraftBody {
  idea_id: string;
  created_at: string;
  omega: number;
  artifact_hash: string;
}

export interface RenderPayload {
  heuristic: string;
  sentence: string;
}
