import { describe, expect, it } from 'vitest';

import { ApiClient } from '../src/api';
import { TourController } from '../src/tour';
import { RecommendationJson } from '../src/types';
import { ViewState } from '../src/viewState';
import { FakeServer } from './fakeTransport';

function rec(word: string, impact: number): RecommendationJson {
  return {
    word,
    action: { kind: 'REASSIGN_PARENT', targets: [word], destination: 'medic' },
    impact,
    rationale: 'descriptor fits another concept better',
    focus: [0.1, 0.1, 0.4, 0.4],
  };
}

describe('TourController', () => {
  it('walks the fixture queue to completion', async () => {
    const server = new FakeServer();
    server.queue = [rec('care', 0.3), rec('cut', 0.2), rec('oil', 0.1)];
    const tour = new TourController(new ApiClient(server), 's1');

    const first = await tour.start();
    expect(tour.status).toBe('active');
    expect(first!.word).toBe('care');

    const steps = await tour.walk('accept');
    expect(steps).toBe(3);
    expect(tour.status).toBe('complete');
    expect(tour.accepted).toBe(3);
    expect(server.queue).toEqual([]);
  });

  it('applies the action server-side on accept and flags staleness', async () => {
    const server = new FakeServer();
    server.queue = [rec('care', 0.3), rec('cut', 0.2)];
    const tour = new TourController(new ApiClient(server), 's1');
    await tour.start();
    const before = server.generation;

    const next = await tour.accept();
    expect(server.generation).toBe(before + 1);
    expect(server.actionsApplied.at(-1)!.targets).toEqual(['care']);
    expect(tour.projectionStale).toBe(true);
    expect(next!.word).toBe('cut');
  });

  it('moves on without mutating on reject', async () => {
    const server = new FakeServer();
    server.queue = [rec('care', 0.3), rec('cut', 0.2)];
    const tour = new TourController(new ApiClient(server), 's1');
    await tour.start();
    const before = server.generation;

    const next = await tour.reject();
    expect(server.generation).toBe(before);
    expect(server.actionsApplied).toEqual([]);
    expect(tour.projectionStale).toBe(false);
    expect(next!.word).toBe('cut');
    expect(tour.rejected).toBe(1);
  });

  it('reports completion immediately on an empty queue', async () => {
    const server = new FakeServer();
    server.queue = [];
    const tour = new TourController(new ApiClient(server), 's1');
    expect(await tour.start()).toBeNull();
    expect(tour.status).toBe('complete');
  });

  it('zooms the canvas to the focus rectangle', async () => {
    const server = new FakeServer();
    server.queue = [rec('care', 0.3)];
    const view = new ViewState();
    const tour = new TourController(new ApiClient(server), 's1', view);
    await tour.start();
    // focus box is 0.3 wide, so the zoom factor is 1 / 0.3
    expect(view.transform.k).toBeCloseTo(1 / 0.3, 9);
    expect(view.transform.x).toBeCloseTo(-0.1 / 0.3, 9);
  });
});
