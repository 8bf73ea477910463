/** Typed client for the plainlang service API. */

export interface ApiErrorBody {
  code: string;
  message: string;
  http_status: number;
}

export class ServiceError extends Error {
  readonly code: string;
  readonly httpStatus: number;

  constructor(body: ApiErrorBody) {
    super(body.message);
    this.name = "ServiceError";
    this.code = body.code;
    this.httpStatus = body.http_status;
  }

  /** Transient upstream trouble worth a retry button. */
  get retryable(): boolean {
    return this.httpStatus >= 502;
  }
}

export interface Readability {
  fre: number;
  fk_grade: number;
}

export interface SimplifyResponse {
  job_id: string;
  simplified_text: string;
  audience: string;
  model: string;
  readability: Readability;
}

export interface UploadResponse {
  text: string;
  format: string;
  warnings: string[];
}

export interface AudienceInfo {
  label: string;
  display_name: string;
}

export interface AudiencesResponse {
  audiences: AudienceInfo[];
  default: string;
}

export class ApiClient {
  constructor(private readonly baseUrl: string = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.baseUrl + path, init);
    if (response.status === 204) {
      return undefined as T;
    }
    let body: unknown;
    try {
      body = await response.json();
    } catch {
      body = undefined;
    }
    if (!response.ok) {
      const error = body as Partial<ApiErrorBody> | undefined;
      throw new ServiceError({
        code: error?.code ?? "internal_error",
        message: error?.message ?? `request failed with status ${response.status}`,
        http_status: error?.http_status ?? response.status,
      });
    }
    return body as T;
  }

  private post<T>(path: string, payload: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  simplify(text: string, audience?: string, model?: string): Promise<SimplifyResponse> {
    const payload: Record<string, string> = { text };
    if (audience) payload.audience = audience;
    if (model) payload.model = model;
    return this.post("/api/simplify", payload);
  }

  upload(file: Blob, filename: string): Promise<UploadResponse> {
    const form = new FormData();
    form.append("file", file, filename);
    return this.request("/api/upload", { method: "POST", body: form });
  }

  rephrase(sentence: string, level: number): Promise<{ variant: string }> {
    return this.post("/api/expert/rephrase", { sentence, level });
  }

  synonyms(word: string, sentence: string): Promise<{ synonyms: string[] }> {
    return this.post("/api/expert/synonyms", { word, sentence });
  }

  definition(word: string, sentence: string): Promise<{ definition: string }> {
    return this.post("/api/expert/definition", { word, sentence });
  }

  feedback(jobId: string, stars: number, comment?: string): Promise<void> {
    const payload: Record<string, unknown> = { job_id: jobId, stars };
    if (comment) payload.comment = comment;
    return this.post("/api/feedback", payload);
  }

  split(text: string): Promise<string[]> {
    const query = new URLSearchParams({ text });
    return this.request<{ sentences: string[] }>(`/api/split?${query}`).then(
      (body) => body.sentences,
    );
  }

  health(): Promise<{ status: string; model: string }> {
    return this.request("/api/health");
  }

  audiences(): Promise<AudiencesResponse> {
    return this.request("/api/audiences");
  }
}
