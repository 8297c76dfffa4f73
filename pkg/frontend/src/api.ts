/**
 * Typed client for the annotation service HTTP API.
 */

export type VoteLabel = "ethics" | "not_ethics";

export interface QueueItem {
  id: string;
  title: string;
  abstract: string;
  machine_probability: number | null;
  votes_so_far: number;
}

export interface VoteSubmission {
  id: string;
  annotator_id: string;
  label: VoteLabel;
}

export interface VoteOutcome {
  id: string;
  status: string;
  label: string | null;
}

export interface ProvenanceCounts {
  human: number;
  machine: number;
  unlabeled: number;
}

export interface StatusInfo {
  model_version: number;
  n_docs: number;
  counts: ProvenanceCounts;
  ethics_proportion: number | null;
}

export interface RetrainSummary {
  model_version: number;
  n_training_rows: number;
  metrics: {
    roc_auc: number;
    precision: number | null;
    recall: number | null;
  } | null;
  queue_size: number;
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export class ApiClient {
  private readonly baseUrl: string;
  private readonly fetchFn: FetchLike;

  constructor(baseUrl: string, fetchFn?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
    // bind lazily so a bare global fetch keeps its expected receiver
    this.fetchFn = fetchFn ?? ((input, init) => fetch(input, init));
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, init);
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const body = (await response.json()) as { detail?: string };
        if (body.detail) detail = body.detail;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  getQueue(limit: number, annotator: string): Promise<QueueItem[]> {
    const params = new URLSearchParams({
      limit: String(limit),
      annotator,
    });
    return this.request<QueueItem[]>(`/api/queue?${params}`);
  }

  async postLabels(votes: VoteSubmission[]): Promise<VoteOutcome[]> {
    const body = await this.request<{ results: VoteOutcome[] }>("/api/labels", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(votes),
    });
    return body.results;
  }

  postRetrain(seed: number): Promise<RetrainSummary> {
    return this.request<RetrainSummary>("/api/retrain", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ seed }),
    });
  }

  getStatus(): Promise<StatusInfo> {
    return this.request<StatusInfo>("/api/status");
  }

  async exportDataset(): Promise<string> {
    const response = await this.fetchFn(`${this.baseUrl}/api/export`);
    if (!response.ok) {
      throw new ApiError(response.status, response.statusText);
    }
    return response.text();
  }
}
