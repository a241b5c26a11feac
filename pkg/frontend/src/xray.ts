/**
 * The x-ray lens: peek through all layers at once at a canvas position.
 * The server answers from its spatial index; the lens only formats the
 * result, keeping a stable layer order and empty-layer indicators.
 */

import { ApiClient } from './api';
import { XrayJson } from './types';

export const XRAY_LAYER_ORDER: (keyof XrayJson)[] = [
  'super_concepts',
  'concepts',
  'descriptors',
  'base_words',
  'topics',
  'documents',
];

export interface LensRow {
  layer: keyof XrayJson;
  items: string[];
  empty: boolean;
}

export class XrayLens {
  radius: number;

  constructor(
    private api: ApiClient,
    private sessionId: string,
    radius = 0.1,
  ) {
    this.radius = radius;
  }

  async inspect(x: number, y: number): Promise<LensRow[]> {
    const result = await this.api.xray(this.sessionId, x, y, this.radius);
    return XRAY_LAYER_ORDER.map((layer) => ({
      layer,
      items: result[layer] ?? [],
      empty: (result[layer] ?? []).length === 0,
    }));
  }
}
