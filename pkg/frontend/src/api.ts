import {
  ActionResponseJson,
  ConceptStateJson,
  JobJson,
  QualityJson,
  RecommendationJson,
  RefinementAction,
  ReviewResponseJson,
  SearchHitJson,
  TopicStateJson,
  XrayJson,
} from './types';

/**
 * Minimal transport abstraction so the client can run against fetch in
 * the browser and against a canned server in tests.
 */
export interface Transport {
  request(
    method: 'GET' | 'POST' | 'PUT',
    path: string,
    body?: unknown,
    params?: Record<string, string | number>,
  ): Promise<unknown>;
}

export class HttpError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

export function fetchTransport(baseUrl: string): Transport {
  return {
    async request(method, path, body, params) {
      const url = new URL(baseUrl + path);
      for (const [k, v] of Object.entries(params ?? {})) {
        url.searchParams.set(k, String(v));
      }
      const resp = await fetch(url.toString(), {
        method,
        headers: { 'Content-Type': 'application/json' },
        body: body === undefined ? undefined : JSON.stringify(body),
      });
      if (!resp.ok) {
        throw new HttpError(resp.status, await resp.text());
      }
      return resp.json();
    },
  };
}

/** Typed wrapper over every endpoint the service exposes. */
export class ApiClient {
  constructor(private transport: Transport) {}

  async createSession(
    corpusPath: string,
    embeddingsPath: string,
    config?: Record<string, unknown>,
  ): Promise<{ id: string; generation: number }> {
    return (await this.transport.request('POST', '/sessions', {
      corpus_path: corpusPath,
      embeddings_path: embeddingsPath,
      config,
    })) as { id: string; generation: number };
  }

  async conceptState(id: string): Promise<ConceptStateJson> {
    return (await this.transport.request('GET', `/sessions/${id}/state`, undefined, {
      view: 'concept',
    })) as ConceptStateJson;
  }

  async topicState(id: string): Promise<TopicStateJson> {
    return (await this.transport.request('GET', `/sessions/${id}/state`, undefined, {
      view: 'topic',
    })) as TopicStateJson;
  }

  async applyAction(id: string, action: RefinementAction): Promise<ActionResponseJson> {
    return (await this.transport.request('POST', `/sessions/${id}/actions`, {
      kind: action.kind,
      targets: action.targets,
      destination: action.destination ?? null,
    })) as ActionResponseJson;
  }

  async recompute(id: string, kind: 'tsne' | 'topics'): Promise<JobJson> {
    return (await this.transport.request(
      'POST',
      `/sessions/${id}/recompute/${kind}`,
    )) as JobJson;
  }

  async currentJob(id: string): Promise<JobJson> {
    return (await this.transport.request('GET', `/sessions/${id}/jobs/current`)) as JobJson;
  }

  async recommendations(id: string): Promise<RecommendationJson[]> {
    const body = (await this.transport.request(
      'GET',
      `/sessions/${id}/recommendations`,
    )) as { recommendations: RecommendationJson[] };
    return body.recommendations;
  }

  async review(id: string, idx: number, verdict: 'accept' | 'reject'): Promise<ReviewResponseJson> {
    return (await this.transport.request(
      'POST',
      `/sessions/${id}/recommendations/${idx}/${verdict}`,
    )) as ReviewResponseJson;
  }

  async quality(id: string): Promise<QualityJson> {
    return (await this.transport.request('GET', `/sessions/${id}/quality`)) as QualityJson;
  }

  async search(id: string, q: string): Promise<SearchHitJson[]> {
    const body = (await this.transport.request('GET', `/sessions/${id}/search`, undefined, {
      q,
    })) as { results: SearchHitJson[] };
    return body.results;
  }

  async xray(id: string, x: number, y: number, r: number): Promise<XrayJson> {
    return (await this.transport.request('GET', `/sessions/${id}/xray`, undefined, {
      x,
      y,
      r,
    })) as XrayJson;
  }

  async abstraction(id: string): Promise<number> {
    const body = (await this.transport.request('GET', `/sessions/${id}/abstraction`)) as {
      level: number;
    };
    return body.level;
  }

  async setAbstraction(id: string, level: number): Promise<{ level: number; generation: number }> {
    return (await this.transport.request('PUT', `/sessions/${id}/abstraction`, {
      level,
    })) as { level: number; generation: number };
  }

  async exportPart(
    id: string,
    what: 'hierarchy' | 'weights' | 'topics' | 'layout',
  ): Promise<unknown> {
    return this.transport.request('GET', `/sessions/${id}/export/${what}`);
  }
}
