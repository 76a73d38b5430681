import type {
  FieldPanelPayload,
  IdeaDraftBody,
  IdeaOrder,
  IdeaRecordPayload,
  Level,
  MapPayload,
  NearbyPayload,
  PatentPayload,
  PositionPayload,
  RenderPayload,
} from "./types.js";

export class ApiError extends Error {
  constructor(readonly status: number, detail: string) {
    super(detail);
    this.name = "ApiError";
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

const defaultFetch: FetchLike = (input, init) => fetch(input, init);

/**
 * Thin typed client over the service endpoints. Every number the UI
 * shows comes out of these payloads untouched; the client never
 * derives a score of its own.
 */
export class AtlasClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = defaultFetch,
  ) {}

  private url(path: string, params?: Record<string, string | number | undefined>): string {
    const query = new URLSearchParams();
    for (const [key, value] of Object.entries(params ?? {})) {
      if (value !== undefined) query.set(key, String(value));
    }
    const suffix = query.size > 0 ? `?${query.toString()}` : "";
    return `${this.baseUrl}${path}${suffix}`;
  }

  private async request<T>(path: string, init?: RequestInit,
    params?: Record<string, string | number | undefined>): Promise<T> {
    const response = await this.fetchFn(this.url(path, params), init);
    if (!response.ok) {
      let detail = `${response.status}`;
      try {
        const body = (await response.json()) as { detail?: string };
        if (body.detail) detail = body.detail;
      } catch {
        /* non-JSON error body */
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  map(level: Level, signal?: AbortSignal): Promise<MapPayload> {
    return this.request("/map", { signal }, { level });
  }

  position(q: string, level: Level, signal?: AbortSignal): Promise<PositionPayload> {
    return this.request("/position", { signal }, { q, level });
  }

  nearby(q: string, level: Level, k: number, signal?: AbortSignal): Promise<NearbyPayload> {
    return this.request("/nearby", { signal }, { q, level, k });
  }

  fieldPanel(
    code: string,
    opts: { q?: string; kTerms?: number; kPatents?: number } = {},
    signal?: AbortSignal,
  ): Promise<FieldPanelPayload> {
    return this.request(`/field/${encodeURIComponent(code)}`, { signal }, {
      q: opts.q,
      k_terms: opts.kTerms,
      k_patents: opts.kPatents,
    });
  }

  patent(id: string, signal?: AbortSignal): Promise<PatentPayload> {
    return this.request(`/patent/${encodeURIComponent(id)}`, { signal });
  }

  postIdea(draft: IdeaDraftBody): Promise<IdeaRecordPayload> {
    return this.request("/ideas", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(draft),
    });
  }

  ideas(order: IdeaOrder, signal?: AbortSignal): Promise<IdeaRecordPayload[]> {
    return this.request("/ideas", { signal }, { order });
  }

  renderIdea(
    heuristic: string,
    stimulus: string,
    target: string,
    signal?: AbortSignal,
  ): Promise<RenderPayload> {
    return this.request("/ideas/render", { signal }, { heuristic, stimulus, target });
  }
}
