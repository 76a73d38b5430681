import type { IdeaOrder, Level } from "./types.js";

export interface ViewState {
  level: Level;
  query: string;
  sliderK: number;
  selectedField: string | null;
  ideaOrder: IdeaOrder;
}

export const initialState: ViewState = {
  level: 3,
  query: "",
  sliderK: 0,
  selectedField: null,
  ideaOrder: "proximity_desc",
};

/** slider_k stays within [0, |white_fields|]. */
export function clampSliderK(k: number, whiteCount: number): number {
  if (!Number.isFinite(k)) return 0;
  return Math.max(0, Math.min(Math.floor(k), Math.max(0, whiteCount)));
}

/** A selected field must exist at the current level; otherwise drop it. */
export function reconcileSelection(state: ViewState, nodeCodes: Set<string>): ViewState {
  if (state.selectedField !== null && !nodeCodes.has(state.selectedField)) {
    return { ...state, selectedField: null };
  }
  return state;
}

/**
 * Latest-wins guard: at most one in-flight request counts per
 * interaction kind; stale responses are dropped by token comparison.
 */
export class LatestWins {
  private tokens = new Map<string, number>();

  begin(kind: string): number {
    const next = (this.tokens.get(kind) ?? 0) + 1;
    this.tokens.set(kind, next);
    return next;
  }

  isCurrent(kind: string, token: number): boolean {
    return this.tokens.get(kind) === token;
  }
}
