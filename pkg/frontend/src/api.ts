/** Typed client for the curation service's HTTP JSON API. */

export interface Alias {
  source_taxonomy: string;
  original_name: string;
  citation_key: string;
}

export interface PatternView {
  id: string;
  name: string;
  definition: string;
  tags: string[];
  in_degree: number;
  aliases: Alias[];
}

export interface EdgeView {
  kind: string;
  src: string;
  dst: string;
  rationale: string;
}

export interface GraphView {
  version: { major: number; minor: number };
  patterns: PatternView[];
  edges: EdgeView[];
}

export interface CommunityView {
  id: number;
  size: number;
  members: string[];
  main_pattern: string | null;
}

export interface CommunitiesResponse {
  detected: boolean;
  communities: CommunityView[];
}

export interface CandidateSide {
  id: string;
  name: string;
  definition: string;
  aliases: string[];
}

export interface Candidate {
  id: string;
  kind: string;
  status: string;
  rationale: string;
  a: CandidateSide;
  b: CandidateSide;
  scores: {
    name_sim: number;
    def_sim: number;
    neighbor_sim: number;
    total: number;
  };
}

/** Thrown for non-2xx responses; callers branch on `status` (e.g. 409). */
export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

export class ApiClient {
  constructor(private readonly base: string = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await fetch(this.base + path, init);
    if (!resp.ok) {
      let detail = resp.statusText;
      try {
        const body = await resp.json();
        if (typeof body?.detail === "string") detail = body.detail;
      } catch {
        /* non-JSON error body */
      }
      throw new ApiError(resp.status, detail);
    }
    const type = resp.headers.get("content-type") ?? "";
    if (type.includes("application/json")) return (await resp.json()) as T;
    return (await resp.text()) as unknown as T;
  }

  graph(): Promise<GraphView> {
    return this.request<GraphView>("/graph");
  }

  communities(): Promise<CommunitiesResponse> {
    return this.request<CommunitiesResponse>("/communities");
  }

  detect(resolution = 1.0, seed = 0): Promise<unknown> {
    return this.request("/detect", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ resolution, seed }),
    });
  }

  async candidates(): Promise<Candidate[]> {
    const body = await this.request<{ candidates: Candidate[] }>("/candidates");
    return body.candidates;
  }

  verdict(
    id: string,
    verdict: "approve" | "reject",
    rationale: string,
  ): Promise<Candidate> {
    return this.request<Candidate>(
      `/candidates/${encodeURIComponent(id)}/verdict`,
      {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ verdict, rationale }),
      },
    );
  }

  enact(id: string): Promise<unknown> {
    return this.request(`/enact/${encodeURIComponent(id)}`, { method: "POST" });
  }

  changelog(): Promise<string> {
    return this.request<string>("/changelog");
  }
}
