/**
 * Lasso selection and the selection-sensitive context menu. The menu
 * only ever offers actions the server's permission matrix would accept;
 * the chosen action is POSTed, never applied locally.
 */

import { ApiClient } from './api';
import { Mark } from './scene';
import { ActionKind, ActionResponseJson, Level } from './types';
import { LayerName } from './viewState';

/** Ray-casting point-in-polygon test; boundary points count as inside. */
export function pointInPolygon(x: number, y: number, polygon: [number, number][]): boolean {
  let inside = false;
  const n = polygon.length;
  for (let i = 0, j = n - 1; i < n; j = i++) {
    const [xi, yi] = polygon[i];
    const [xj, yj] = polygon[j];
    if (xi === x && yi === y) {
      return true;
    }
    const crosses = yi > y !== yj > y && x < ((xj - xi) * (y - yi)) / (yj - yi) + xi;
    if (crosses) {
      inside = !inside;
    }
  }
  return inside;
}

export interface Selected {
  word: string;
  layer: LayerName;
}

/**
 * Visible, interactive point marks inside the lasso path. Shine-through
 * and decoration layers never make it into a selection.
 */
export function lassoSelect(marks: Mark[], path: [number, number][]): Selected[] {
  const seen = new Set<string>();
  const out: Selected[] = [];
  if (path.length < 3) {
    return out;
  }
  for (const mark of marks) {
    if (!mark.interactive || (mark.kind !== 'label' && mark.kind !== 'circle')) {
      continue;
    }
    const word = mark.id.replace(/^(label|circle|topic)-/, '');
    if (seen.has(word) || !pointInPolygon(mark.x, mark.y, path)) {
      continue;
    }
    seen.add(word);
    out.push({ word, layer: mark.layer });
  }
  return out;
}

const PERMISSIONS: Record<Level, ActionKind[]> = {
  SUPER_CONCEPT: [],
  CONCEPT: ['DEMOTE', 'REASSIGN_CHILDREN', 'SPLIT', 'MERGE', 'SWAP', 'DELETE'],
  DESCRIPTOR: [
    'PROMOTE',
    'DEMOTE',
    'REASSIGN_PARENT',
    'SPLIT',
    'MERGE',
    'DELETE',
    'CREATE_CONCEPT_FROM_SELECTION',
  ],
  BASE: ['PROMOTE', 'ADD_WORD'],
};

function levelOf(layer: LayerName): Level | null {
  switch (layer) {
    case 'superConcepts':
      return 'SUPER_CONCEPT';
    case 'concepts':
      return 'CONCEPT';
    case 'descriptors':
      return 'DESCRIPTOR';
    case 'baseWords':
      return 'BASE';
    default:
      return null;
  }
}

/**
 * Actions every selected object permits. An empty selection, or one
 * touching a non-interactive level, yields an empty menu.
 */
export function contextMenu(selection: Selected[]): ActionKind[] {
  if (selection.length === 0) {
    return [];
  }
  let allowed: ActionKind[] | null = null;
  for (const item of selection) {
    const level = levelOf(item.layer);
    if (level === null) {
      return [];
    }
    const here = new Set<ActionKind>(PERMISSIONS[level]);
    allowed = allowed === null ? [...here] : allowed.filter((a) => here.has(a));
  }
  const kinds: ActionKind[] = allowed ?? [];
  // creating a concept needs at least two words to gather
  if (selection.length < 2) {
    return kinds.filter((k) => k !== 'CREATE_CONCEPT_FROM_SELECTION');
  }
  return kinds;
}

export async function dispatchCreateConcept(
  api: ApiClient,
  sessionId: string,
  selection: Selected[],
): Promise<ActionResponseJson> {
  const targets = selection.map((s) => s.word).sort();
  return api.applyAction(sessionId, {
    kind: 'CREATE_CONCEPT_FROM_SELECTION',
    targets,
  });
}
