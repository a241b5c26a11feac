import { describe, expect, it } from 'vitest';

import { buildScene, hitTest, labelSize, StaleGenerationError } from '../src/scene';
import { ConceptStateJson, TopicStateJson } from '../src/types';
import { LAYERS, SHINE_THROUGH_OPACITY, ViewState } from '../src/viewState';

import conceptFixture from './fixtures/state_concept.json';
import topicFixture from './fixtures/state_topic.json';

const concept = conceptFixture as unknown as ConceptStateJson;
const topic = topicFixture as unknown as TopicStateJson;

function allLayersOn(): ViewState {
  const view = new ViewState();
  for (const layer of LAYERS) {
    view.visible[layer] = true;
  }
  return view;
}

describe('buildScene', () => {
  it('draws all six layers when every toggle is on', () => {
    const marks = buildScene(concept, topic, allLayersOn());
    const layers = new Set(marks.map((m) => m.layer));
    for (const layer of LAYERS) {
      expect(layers.has(layer), layer).toBe(true);
    }
  });

  it('doubles label sizes per hierarchy level', () => {
    expect(labelSize('DESCRIPTOR')).toBe(2 * labelSize('BASE'));
    expect(labelSize('CONCEPT')).toBe(2 * labelSize('DESCRIPTOR'));
    expect(labelSize('SUPER_CONCEPT')).toBe(2 * labelSize('CONCEPT'));
  });

  it('places every spike endpoint at sim x dist along its direction', () => {
    const marks = buildScene(concept, topic, allLayersOn());
    const spikes = marks.filter((m) => m.kind === 'spike');
    expect(spikes.length).toBeGreaterThan(0);
    for (const [tid, glyph] of Object.entries(topic.glyphs)) {
      for (const spike of glyph.spikes) {
        expect(spike.endpoint_distance).toBeCloseTo(spike.sim * spike.dist, 9);
        const mark = spikes.find((m) => m.id === `glyph-${tid}-${spike.concept}`)!;
        const drawn = Math.hypot(mark.x2 - mark.x1, mark.y2 - mark.y1);
        expect(drawn).toBeCloseTo(spike.endpoint_distance, 9);
      }
    }
  });

  it('fades the inactive view and strips its interactivity', () => {
    const view = allLayersOn();
    view.setActiveView('concept');
    const marks = buildScene(concept, topic, view);
    for (const mark of marks.filter((m) => m.layer === 'topicGlyphs')) {
      expect(mark.opacity).toBeLessThanOrEqual(SHINE_THROUGH_OPACITY);
      expect(mark.interactive).toBe(false);
    }
    view.setActiveView('topic');
    const flipped = buildScene(concept, topic, view);
    for (const mark of flipped.filter((m) => m.layer === 'descriptors')) {
      expect(mark.opacity).toBe(SHINE_THROUGH_OPACITY);
      expect(mark.interactive).toBe(false);
    }
  });

  it('keeps super concepts non-interactive and gray in every view', () => {
    const marks = buildScene(concept, topic, allLayersOn());
    const supers = marks.filter((m) => m.layer === 'superConcepts');
    expect(supers.length).toBeGreaterThan(0);
    for (const mark of supers) {
      expect(mark.interactive).toBe(false);
      if (mark.kind === 'label') {
        expect(mark.color).toBe('#9a9a9a');
      }
    }
  });

  it('keeps labels and hit-testing when circles are toggled off', () => {
    const view = allLayersOn();
    const withCircles = buildScene(concept, topic, view);
    view.showCircles = false;
    const without = buildScene(concept, topic, view);
    expect(without.some((m) => m.kind === 'circle' && m.layer === 'descriptors')).toBe(false);
    const label = without.find((m) => m.kind === 'label' && m.layer === 'descriptors')!;
    expect(withCircles.some((m) => m.id === label.id)).toBe(true);
    const hits = hitTest(without, label.x, label.y, 0.01);
    expect(hits.some((m) => m.id === label.id)).toBe(true);
  });

  it('refuses to mix snapshot generations', () => {
    const stale = { ...topic, generation: topic.generation + 1 };
    expect(() => buildScene(concept, stale, allLayersOn())).toThrow(StaleGenerationError);
  });
});
