/** Typed client for the server's v1 HTTP and websocket endpoints. */
import {
  API_VERSION,
  type CursorRay,
  type DefinitionEntry,
  type HouseEntry,
  type MetricsReply,
  type PromptBlock,
  type SessionInfo,
  type UtteranceReply,
  type WorldDiff,
  type WorldReply,
} from './types.js';

type FetchLike = typeof fetch;

export interface WebSocketLike {
  // loose event type so browser WebSocket and the `ws` package both fit
  onmessage: ((ev: any) => void) | null;
  close(): void;
}

export type WebSocketFactory = (url: string) => WebSocketLike;

export class ApiError extends Error {
  constructor(message: string, readonly status: number) {
    super(message);
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = fetch,
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const resp = await this.fetchImpl(`${this.baseUrl}${path}`, {
      method,
      headers: body === undefined ? undefined : { 'content-type': 'application/json' },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const doc = (await resp.json()) as T & { error?: string };
    if (!resp.ok && resp.status !== 200) {
      throw new ApiError(doc.error ?? `request failed: ${resp.status}`, resp.status);
    }
    return doc;
  }

  listHouses(): Promise<{ v: number; houses: HouseEntry[] }> {
    return this.request('GET', '/v1/houses');
  }

  createSession(houseId: string, sessionIndex = 1): Promise<SessionInfo> {
    return this.request('POST', '/v1/sessions', {
      v: API_VERSION,
      house_id: houseId,
      session_index: sessionIndex,
    });
  }

  sendUtterance(sessionId: string, text: string, cursor?: CursorRay): Promise<UtteranceReply> {
    return this.request('POST', `/v1/sessions/${sessionId}/utterance`, {
      v: API_VERSION,
      text,
      cursor: cursor ?? null,
    });
  }

  sendHint(sessionId: string, cursor: CursorRay, prompt?: PromptBlock[]): Promise<UtteranceReply> {
    return this.request('POST', `/v1/sessions/${sessionId}/hint`, {
      v: API_VERSION,
      cursor,
      prompt: prompt && prompt.length ? prompt : null,
    });
  }

  world(sessionId: string, sinceSeq = -1): Promise<WorldReply> {
    return this.request('GET', `/v1/sessions/${sessionId}/world?since_seq=${sinceSeq}`);
  }

  definitions(): Promise<{ v: number; entries: DefinitionEntry[] }> {
    return this.request('GET', '/v1/definitions');
  }

  metrics(sessionsFilter = '2,3'): Promise<MetricsReply> {
    return this.request('GET', `/v1/metrics?sessions_filter=${encodeURIComponent(sessionsFilter)}`);
  }

  /** Subscribe to the per-session diff push channel. */
  stream(
    sessionId: string,
    sinceSeq: number,
    onDiff: (diff: WorldDiff) => void,
    makeSocket: WebSocketFactory,
  ): WebSocketLike {
    const wsBase = this.baseUrl.replace(/^http/, 'ws');
    const socket = makeSocket(
      `${wsBase}/v1/sessions/${sessionId}/stream?since_seq=${sinceSeq}`,
    );
    socket.onmessage = (ev) => {
      try {
        const doc = JSON.parse(String(ev.data)) as WorldDiff & { error?: string };
        if (doc.error === undefined) onDiff(doc);
      } catch {
        /* ignore malformed frames */
      }
    };
    return socket;
  }
}
