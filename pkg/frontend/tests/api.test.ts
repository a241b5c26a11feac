import { describe, expect, it } from 'vitest';

import { ApiClient } from '../src/api';
import { FakeServer } from './fakeTransport';

describe('ApiClient', () => {
  it('creates a session and reads both state views', async () => {
    const server = new FakeServer();
    const api = new ApiClient(server);
    const created = await api.createSession('debate.jsonl', 'vectors.txt', {
      iterations: 500,
    });
    expect(created.id).toBe('s1');

    const concept = await api.conceptState('s1');
    expect(concept.hierarchy.super_concepts.length).toBeGreaterThan(0);
    expect(concept.layout.objects.length).toBeGreaterThan(0);
    expect(concept.layout.voronoi.length).toBeGreaterThan(0);

    const topic = await api.topicState('s1');
    expect(topic.topics.topics.length).toBeGreaterThan(0);
    expect(Object.keys(topic.glyphs).length).toBe(topic.topics.topics.length);
    for (const t of topic.topics.topics) {
      expect(['SINGLE_CONCEPT', 'MULTI_CONCEPT', 'UNREPRESENTED', 'CONCEPT_INCOHERENT']).toContain(
        t.case,
      );
    }
  });

  it('builds endpoint paths and query parameters correctly', async () => {
    const server = new FakeServer();
    const api = new ApiClient(server);
    await api.search('s1', 'ta');
    await api.quality('s1');
    await api.setAbstraction('s1', 1);
    await api.currentJob('s1');
    const paths = server.log.map((c) => `${c.method} ${c.path}`);
    expect(paths).toEqual([
      'GET /sessions/s1/search',
      'GET /sessions/s1/quality',
      'PUT /sessions/s1/abstraction',
      'GET /sessions/s1/jobs/current',
    ]);
    expect(server.log[0].params).toEqual({ q: 'ta' });
  });

  it('bumps the generation on every applied action', async () => {
    const server = new FakeServer();
    const api = new ApiClient(server);
    const r1 = await api.applyAction('s1', { kind: 'PROMOTE', targets: ['oil'] });
    const r2 = await api.applyAction('s1', {
      kind: 'REASSIGN_PARENT',
      targets: ['care'],
      destination: 'medic',
    });
    expect(r2.generation).toBe(r1.generation + 1);
    expect(r1.hierarchy_hash).not.toBe(r2.hierarchy_hash);
  });

  it('search hits carry the add-as-descriptor affordance flag', async () => {
    const server = new FakeServer();
    const api = new ApiClient(server);
    const hits = await api.search('s1', 'ta');
    expect(hits.length).toBeGreaterThan(0);
    for (const hit of hits) {
      expect(typeof hit.can_add_as_descriptor).toBe('boolean');
      expect(hit.can_add_as_descriptor).toBe(hit.level === 'BASE');
    }
  });
});
