/** Typed client for the pipeline service. The UI talks to nothing else;
 *  render workers and LLM endpoints stay behind the service. */

import type {
  GraphDoc,
  KbDoc,
  LayoutDoc,
  RecordDoc,
  ReplayDoc,
  SpeciesEntry,
  StyleDoc,
} from './types.js';

interface ResponseLike {
  ok: boolean;
  status: number;
  text(): Promise<string>;
}

export type FetchLike = (
  url: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string },
) => Promise<ResponseLike>;

export class ServiceError extends Error {
  constructor(
    public status: number,
    detail: string,
  ) {
    super(detail);
    this.name = 'ServiceError';
  }
}

export interface ConcretizeRequest {
  text?: string;
  graph?: GraphDoc;
  style?: StyleDoc;
}

export interface RenderRequest {
  layout?: LayoutDoc;
  style?: StyleDoc;
  seed?: number;
}

export interface SessionSummary {
  session_id: string;
  records: number;
  created: string;
  description: string;
}

export class ServiceClient {
  constructor(
    private baseUrl: string,
    private fetchImpl: FetchLike = fetch as unknown as FetchLike,
  ) {
    this.baseUrl = baseUrl.replace(/\/$/, '');
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: Parameters<FetchLike>[1] = { method };
    if (body !== undefined) {
      init.headers = { 'Content-Type': 'application/json' };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, init);
    const text = await response.text();
    let payload: unknown = null;
    try {
      payload = text ? JSON.parse(text) : null;
    } catch {
      payload = null;
    }
    if (!response.ok) {
      const record = (payload ?? {}) as Record<string, unknown>;
      const detail =
        (record.detail as string | undefined) ??
        (record.error as string | undefined) ??
        text ??
        `HTTP ${response.status}`;
      throw new ServiceError(response.status, String(detail));
    }
    return payload as T;
  }

  async healthy(): Promise<boolean> {
    try {
      await this.request<{ status: string }>('GET', '/healthz');
      return true;
    } catch {
      return false;
    }
  }

  /** The species palette comes from here, never from UI constants. */
  async kb(): Promise<KbDoc> {
    return this.request<KbDoc>('GET', '/kb');
  }

  async palette(): Promise<SpeciesEntry[]> {
    const kb = await this.kb();
    return [...kb.species].sort((a, b) => a.species.localeCompare(b.species));
  }

  async createSession(description: string): Promise<string> {
    const body = await this.request<{ session_id: string }>('POST', '/sessions', {
      description,
    });
    return body.session_id;
  }

  async listSessions(): Promise<SessionSummary[]> {
    const body = await this.request<{ sessions: SessionSummary[] }>('GET', '/sessions');
    return body.sessions;
  }

  async history(sessionId: string): Promise<RecordDoc[]> {
    const body = await this.request<{ records: RecordDoc[] }>(
      'GET',
      `/sessions/${sessionId}/history`,
    );
    return body.records;
  }

  async concretize(sessionId: string, request: ConcretizeRequest): Promise<RecordDoc> {
    return this.request<RecordDoc>(
      'POST',
      `/sessions/${sessionId}/concretize`,
      request,
    );
  }

  async render(sessionId: string, request: RenderRequest): Promise<RecordDoc> {
    return this.request<RecordDoc>('POST', `/sessions/${sessionId}/render`, request);
  }

  async replay(sessionId: string): Promise<ReplayDoc> {
    return this.request<ReplayDoc>('GET', `/sessions/${sessionId}/replay`);
  }

  imageUrl(ref: string): string {
    return `${this.baseUrl}/images/${ref}`;
  }
}
