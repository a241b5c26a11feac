/**
 * Turns a pair of state snapshots into a flat list of drawable objects,
 * one entry per mark, grouped into six layers. The renderer proper just
 * walks the list in order; everything the paper encodes (label doubling,
 * glyph spikes, shine-through fading) is decided here.
 */

import { ConceptStateJson, GlyphJson, Level, TopicStateJson } from './types';
import { LayerName, ViewState } from './viewState';

export const LABEL_BASE_SIZE = 10;
export const SUPER_LABEL_COLOR = '#9a9a9a';

/** Label sizes double at every hierarchy level. */
export function labelSize(level: Level): number {
  switch (level) {
    case 'BASE':
      return LABEL_BASE_SIZE;
    case 'DESCRIPTOR':
      return LABEL_BASE_SIZE * 2;
    case 'CONCEPT':
      return LABEL_BASE_SIZE * 4;
    case 'SUPER_CONCEPT':
      return LABEL_BASE_SIZE * 8;
  }
}

export interface LabelMark {
  kind: 'label';
  id: string;
  layer: LayerName;
  x: number;
  y: number;
  text: string;
  size: number;
  color: string;
  opacity: number;
  interactive: boolean;
}

export interface CircleMark {
  kind: 'circle';
  id: string;
  layer: LayerName;
  x: number;
  y: number;
  r: number;
  color: string;
  opacity: number;
  interactive: boolean;
}

export interface SpikeMark {
  kind: 'spike';
  id: string;
  layer: LayerName;
  x1: number;
  y1: number;
  x2: number;
  y2: number;
  color: string;
  opacity: number;
  interactive: boolean;
}

export interface PolylineMark {
  kind: 'polyline';
  id: string;
  layer: LayerName;
  points: [number, number][];
  color: string;
  opacity: number;
  interactive: boolean;
}

export type Mark = LabelMark | CircleMark | SpikeMark | PolylineMark;

export class StaleGenerationError extends Error {}

function layerOf(layer: string): LayerName {
  switch (layer) {
    case 'SUPER_CONCEPT':
      return 'superConcepts';
    case 'CONCEPT':
      return 'concepts';
    case 'DESCRIPTOR':
      return 'descriptors';
    default:
      return 'baseWords';
  }
}

/** One spike per related concept; the endpoint sits at sim x dist. */
export function spikeMarks(
  topicId: string,
  glyph: GlyphJson,
  opacityScale: number,
  interactive: boolean,
): SpikeMark[] {
  const [gx, gy] = glyph.position;
  return glyph.spikes.map((s) => ({
    kind: 'spike' as const,
    id: `glyph-${topicId}-${s.concept}`,
    layer: 'topicGlyphs' as const,
    x1: gx,
    y1: gy,
    x2: gx + s.direction[0] * s.endpoint_distance,
    y2: gy + s.direction[1] * s.endpoint_distance,
    color: s.color,
    opacity: s.opacity * opacityScale,
    interactive,
  }));
}

export function buildScene(
  concept: ConceptStateJson,
  topic: TopicStateJson,
  view: ViewState,
): Mark[] {
  if (concept.generation !== topic.generation) {
    throw new StaleGenerationError(
      `snapshots from generations ${concept.generation} and ${topic.generation}`,
    );
  }
  const marks: Mark[] = [];

  if (view.visible.voronoiBorders) {
    const opacity = view.opacityFor('voronoiBorders');
    for (const cell of concept.layout.voronoi) {
      marks.push({
        kind: 'polyline',
        id: `voronoi-${cell.site}`,
        layer: 'voronoiBorders',
        points: [...cell.polygon, cell.polygon[0]],
        color: SUPER_LABEL_COLOR,
        opacity,
        interactive: false,
      });
    }
  }

  for (const obj of concept.layout.objects) {
    if (obj.layer === 'TOPIC') {
      continue; // topic marks come from the glyph table below
    }
    // a super-concept label is always also a concept word, so it gets
    // the faded background label plus a normal interactive concept mark
    const layers: LayerName[] =
      obj.layer === 'SUPER_CONCEPT' ? ['superConcepts', 'concepts'] : [layerOf(obj.layer)];
    for (const layer of layers) {
      if (!view.visible[layer]) {
        continue;
      }
      const opacity = view.opacityFor(layer);
      const interactive = view.isInteractive(layer);
      const isSuper = layer === 'superConcepts';
      const level: Level = isSuper
        ? 'SUPER_CONCEPT'
        : layer === 'concepts'
          ? 'CONCEPT'
          : (obj.layer as Level);
      marks.push({
        kind: 'label',
        id: `${isSuper ? 'super' : 'label'}-${obj.id}`,
        layer,
        x: obj.x,
        y: obj.y,
        text: obj.id,
        size: labelSize(level),
        color: isSuper ? SUPER_LABEL_COLOR : obj.color,
        opacity,
        interactive,
      });
      if (view.showCircles && !isSuper) {
        marks.push({
          kind: 'circle',
          id: `circle-${obj.id}`,
          layer,
          x: obj.x,
          y: obj.y,
          r: Math.max(obj.w, obj.h) / 2,
          color: obj.color,
          opacity,
          interactive,
        });
      }
    }
  }

  if (view.visible.topicGlyphs) {
    const opacity = view.opacityFor('topicGlyphs');
    const interactive = view.isInteractive('topicGlyphs');
    for (const [tid, glyph] of Object.entries(topic.glyphs)) {
      marks.push({
        kind: 'circle',
        id: `topic-${tid}`,
        layer: 'topicGlyphs',
        x: glyph.position[0],
        y: glyph.position[1],
        r: 0.01,
        color: '#222222',
        opacity,
        interactive,
      });
      marks.push(...spikeMarks(tid, glyph, opacity, interactive));
    }
  }

  return marks;
}

/** Marks under the pointer, front to back; shine-through never hits. */
export function hitTest(marks: Mark[], x: number, y: number, slack = 0.0): Mark[] {
  const hits: Mark[] = [];
  for (const mark of marks) {
    if (!mark.interactive) {
      continue;
    }
    if (mark.kind === 'circle' || mark.kind === 'label') {
      const r = mark.kind === 'circle' ? mark.r : mark.size / 1000;
      const dx = x - mark.x;
      const dy = y - mark.y;
      if (dx * dx + dy * dy <= (r + slack) * (r + slack)) {
        hits.push(mark);
      }
    }
  }
  return hits.reverse();
}
