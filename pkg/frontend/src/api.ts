/** Typed client for the five search-service endpoints. */

export type Point = [number, number];
export type Stroke = Point[];

export interface Prediction {
  icon_class: string;
  confidence: number;
}

export interface RecognizeResponse {
  predictions: Prediction[];
  timing: { recognize_ms: number };
}

export interface IconQuery {
  icon_class: string;
  bbox: [number, number, number, number];
}

export interface ResultRow {
  screen_id: string;
  score: number;
  rank: number;
}

export interface SearchResponse {
  results: ResultRow[];
  count: number;
  limit: number;
  timing: { parse_ms: number; rank_ms: number; total_ms: number };
}

export interface ScreenMeta {
  id: string;
  width: number;
  height: number;
  texts: { text: string; bbox: number[] }[];
  icons: { label: string; bbox: number[] }[];
}

export interface HealthInfo {
  status: string;
  screens: number;
  classes: number;
}

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(detail);
  }
}

export class ApiClient {
  /** base is "" when the UI is served from the same origin as the API. */
  constructor(private base = "") {}

  recognize(strokes: Stroke[]): Promise<RecognizeResponse> {
    return this.post("/api/recognize", { strokes });
  }

  search(icons: IconQuery[], texts: string[], limit?: number): Promise<SearchResponse> {
    const body: Record<string, unknown> = { icons, texts };
    if (limit !== undefined) body.limit = limit;
    return this.post("/api/search", body);
  }

  screen(id: string): Promise<ScreenMeta> {
    return this.get(`/api/screens/${encodeURIComponent(id)}`);
  }

  async classes(): Promise<string[]> {
    const data = await this.get<{ classes: string[] }>("/api/classes");
    return data.classes;
  }

  health(): Promise<HealthInfo> {
    return this.get("/api/health");
  }

  private async post<T>(path: string, body: unknown): Promise<T> {
    const resp = await fetch(this.base + path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
    return this.unwrap(resp);
  }

  private async get<T>(path: string): Promise<T> {
    return this.unwrap(await fetch(this.base + path));
  }

  private async unwrap<T>(resp: Response): Promise<T> {
    if (!resp.ok) {
      let detail = `${resp.status} ${resp.statusText}`;
      try {
        const data = await resp.json();
        if (data && typeof data.detail === "string") detail = data.detail;
      } catch {
        // non-JSON error body, keep the status line
      }
      throw new ApiError(resp.status, detail);
    }
    return resp.json() as Promise<T>;
  }
}
