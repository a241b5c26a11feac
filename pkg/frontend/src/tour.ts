/**
 * Guided refinement tour: the magic-wand loop. Each step zooms to the
 * recommendation's focus rectangle and waits for an accept or reject;
 * accepts mutate the hierarchy server-side, so the projection may go
 * stale until the user hits "update t-SNE".
 */

import { ApiClient } from './api';
import { RecommendationJson } from './types';
import { ViewState } from './viewState';

export type TourStatus = 'idle' | 'active' | 'complete';

export class TourController {
  status: TourStatus = 'idle';
  current: RecommendationJson | null = null;
  accepted = 0;
  rejected = 0;
  /** Set after any accept; cleared by a t-SNE recompute. */
  projectionStale = false;

  private index = 0;

  constructor(
    private api: ApiClient,
    private sessionId: string,
    private view?: ViewState,
  ) {}

  async start(): Promise<RecommendationJson | null> {
    const queue = await this.api.recommendations(this.sessionId);
    this.index = 0;
    this.current = queue.length > 0 ? queue[0] : null;
    this.status = this.current === null ? 'complete' : 'active';
    this.focus();
    return this.current;
  }

  async accept(): Promise<RecommendationJson | null> {
    if (this.current === null) {
      throw new Error('no active recommendation');
    }
    const resp = await this.api.review(this.sessionId, this.index, 'accept');
    this.accepted += 1;
    this.projectionStale = true;
    this.advance(resp.next);
    return this.current;
  }

  async reject(): Promise<RecommendationJson | null> {
    if (this.current === null) {
      throw new Error('no active recommendation');
    }
    const resp = await this.api.review(this.sessionId, this.index, 'reject');
    this.rejected += 1;
    this.advance(resp.next);
    return this.current;
  }

  /** Drains the whole queue with one verdict; returns steps taken. */
  async walk(verdict: 'accept' | 'reject'): Promise<number> {
    let steps = 0;
    if (this.status === 'idle') {
      await this.start();
    }
    while (this.current !== null) {
      await (verdict === 'accept' ? this.accept() : this.reject());
      steps += 1;
    }
    return steps;
  }

  private advance(next: RecommendationJson | null): void {
    this.index = 0; // server rebuilds the queue, head is always next
    this.current = next;
    if (next === null) {
      this.status = 'complete';
    }
    this.focus();
  }

  private focus(): void {
    if (this.view === undefined || this.current === null) {
      return;
    }
    const [x0, y0, x1, y1] = this.current.focus;
    const w = Math.max(x1 - x0, 1e-6);
    const h = Math.max(y1 - y0, 1e-6);
    this.view.transform.k = 1 / Math.max(w, h);
    this.view.transform.x = -x0 * this.view.transform.k;
    this.view.transform.y = -y0 * this.view.transform.k;
  }
}
