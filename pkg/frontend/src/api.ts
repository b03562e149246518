/**
 * Typed client for the reading-service API.
 *
 * The session mode is fixed once at construction (between-subject
 * design): every report request carries that mode, so a baseline
 * session never fetches intent data at all.
 */

import type {
  AnnotationBody,
  MetaPayload,
  Mode,
  ReportListing,
  ReportPayload,
} from "./types.js";

export type FetchLike = (
  input: string,
  init?: RequestInit
) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    detail: string
  ) {
    super(`${code}: ${detail}`);
  }
}

async function parseError(response: Response): Promise<ApiError> {
  let code = "REQUEST_FAILED";
  let detail = response.statusText;
  try {
    const body = await response.json();
    if (body && typeof body.error === "string") {
      code = body.error;
      detail = body.detail ?? detail;
    }
  } catch {
    // non-JSON error body; keep defaults
  }
  return new ApiError(response.status, code, detail);
}

export class ApiClient {
  constructor(
    readonly mode: Mode,
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
    private readonly baseUrl: string = ""
  ) {}

  static async forSession(
    fetchFn: FetchLike = (input, init) => fetch(input, init),
    baseUrl = ""
  ): Promise<ApiClient> {
    const response = await fetchFn(`${baseUrl}/api/meta`);
    if (!response.ok) throw await parseError(response);
    const meta = (await response.json()) as MetaPayload;
    return new ApiClient(meta.condition, fetchFn, baseUrl);
  }

  private async getJson<T>(path: string): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`);
    if (!response.ok) throw await parseError(response);
    return (await response.json()) as T;
  }

  async listReports(): Promise<ReportListing[]> {
    const body = await this.getJson<{ reports: ReportListing[] }>(
      "/api/reports"
    );
    return body.reports;
  }

  /** Fetches a report in the session's fixed mode. */
  async getReport(reportId: string): Promise<ReportPayload> {
    return this.getJson<ReportPayload>(
      `/api/reports/${encodeURIComponent(reportId)}?mode=${this.mode}`
    );
  }

  async postAnnotation(body: AnnotationBody): Promise<string> {
    const response = await this.fetchFn(`${this.baseUrl}/api/annotations`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!response.ok) throw await parseError(response);
    const ack = (await response.json()) as { annotation_id: string };
    return ack.annotation_id;
  }

  /** Server export, verbatim. */
  async exportAnnotations(): Promise<string> {
    const response = await this.fetchFn(`${this.baseUrl}/api/annotations/export`);
    if (!response.ok) throw await parseError(response);
    return response.text();
  }
}
