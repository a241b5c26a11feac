/**
 * Client-side view state: which view is active, which layers are shown,
 * pan/zoom, selection. The hierarchy itself is never mutated here; every
 * change round-trips through POST /actions.
 */

export type ViewName = 'concept' | 'topic';

export type LayerName =
  | 'superConcepts'
  | 'voronoiBorders'
  | 'concepts'
  | 'descriptors'
  | 'baseWords'
  | 'topicGlyphs';

export const LAYERS: LayerName[] = [
  'superConcepts',
  'voronoiBorders',
  'concepts',
  'descriptors',
  'baseWords',
  'topicGlyphs',
];

const CONCEPT_VIEW_LAYERS: Set<LayerName> = new Set([
  'superConcepts',
  'voronoiBorders',
  'concepts',
  'descriptors',
  'baseWords',
]);

/** Opacity applied to layers of the inactive view (shine-through). */
export const SHINE_THROUGH_OPACITY = 0.15;

export interface Transform {
  x: number;
  y: number;
  k: number;
}

export class ViewState {
  activeView: ViewName = 'concept';
  visible: Record<LayerName, boolean>;
  showCircles = true;
  zoomDependentLabels = false;
  transform: Transform = { x: 0, y: 0, k: 1 };
  selection: Set<string> = new Set();
  abstractionLevel = 0;
  /** Generation of the snapshot currently on screen; guards stale renders. */
  generation = 0;

  constructor() {
    this.visible = {
      superConcepts: true,
      voronoiBorders: false,
      concepts: true,
      descriptors: true,
      baseWords: false,
      topicGlyphs: true,
    };
  }

  setActiveView(view: ViewName): void {
    this.activeView = view;
    this.selection.clear();
  }

  toggleLayer(layer: LayerName): void {
    this.visible[layer] = !this.visible[layer];
  }

  viewOf(layer: LayerName): ViewName {
    return CONCEPT_VIEW_LAYERS.has(layer) ? 'concept' : 'topic';
  }

  /** Shine-through layers render faded and never capture pointer events. */
  opacityFor(layer: LayerName): number {
    return this.viewOf(layer) === this.activeView ? 1.0 : SHINE_THROUGH_OPACITY;
  }

  isInteractive(layer: LayerName): boolean {
    if (layer === 'superConcepts' || layer === 'voronoiBorders') {
      return false;
    }
    return this.viewOf(layer) === this.activeView;
  }

  panBy(dx: number, dy: number): void {
    this.transform.x += dx;
    this.transform.y += dy;
  }

  zoomBy(factor: number, cx: number, cy: number): void {
    const k = this.transform.k * factor;
    this.transform.x = cx - (cx - this.transform.x) * factor;
    this.transform.y = cy - (cy - this.transform.y) * factor;
    this.transform.k = k;
  }

  /** Viewport [0,1] coordinates to screen pixels under the current transform. */
  toScreen(x: number, y: number, width: number, height: number): [number, number] {
    return [
      this.transform.x + x * width * this.transform.k,
      this.transform.y + y * height * this.transform.k,
    ];
  }
}
