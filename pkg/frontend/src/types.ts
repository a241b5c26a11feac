/** JSON shapes served by the conceptspace HTTP API. */

export type Level = 'SUPER_CONCEPT' | 'CONCEPT' | 'DESCRIPTOR' | 'BASE';

export type ActionKind =
  | 'PROMOTE'
  | 'DEMOTE'
  | 'REASSIGN_PARENT'
  | 'REASSIGN_CHILDREN'
  | 'SWAP'
  | 'SPLIT'
  | 'MERGE'
  | 'DELETE'
  | 'ADD_WORD'
  | 'CREATE_CONCEPT_FROM_SELECTION';

export interface RefinementAction {
  kind: ActionKind;
  targets: string[];
  destination?: string | null;
}

export interface DescriptorJson {
  word: string;
  provenance: string;
  score: number;
}

export interface ConceptJson {
  word: string;
  descriptors: DescriptorJson[];
}

export interface SuperConceptJson {
  label: string;
  concepts: ConceptJson[];
}

export interface HierarchyJson {
  super_concepts: SuperConceptJson[];
}

export interface CanvasObjectJson {
  id: string;
  layer: Level | 'TOPIC';
  x: number;
  y: number;
  w: number;
  h: number;
  color: string;
}

export interface VoronoiCellJson {
  site: string;
  polygon: [number, number][];
}

export interface LayoutJson {
  objects: CanvasObjectJson[];
  voronoi: VoronoiCellJson[];
}

export interface TopicJson {
  id: number;
  top_keywords: { word: string; weight: number }[];
  docs: string[];
  case: 'SINGLE_CONCEPT' | 'MULTI_CONCEPT' | 'UNREPRESENTED' | 'CONCEPT_INCOHERENT';
}

export interface SpikeJson {
  concept: string;
  sim: number;
  dist: number;
  endpoint_distance: number;
  opacity: number;
  direction: [number, number];
  color: string;
}

export interface GlyphJson {
  position: [number, number];
  spikes: SpikeJson[];
}

export interface ConceptStateJson {
  generation: number;
  view: 'concept';
  level: number;
  hierarchy: HierarchyJson;
  layout: LayoutJson;
}

export interface TopicStateJson {
  generation: number;
  view: 'topic';
  level: number;
  topics: { topics: TopicJson[] };
  glyphs: Record<string, GlyphJson>;
}

export interface RecommendationJson {
  word: string;
  action: RefinementAction;
  impact: number;
  rationale: string;
  focus: [number, number, number, number];
}

export interface QualityJson {
  rmsstd: number;
  s_dbw: number;
  clusters: Record<string, Record<string, number>>;
  topic_model: Record<string, number>;
}

export interface SearchHitJson {
  word: string;
  x: number | null;
  y: number | null;
  level: Level;
  can_add_as_descriptor: boolean;
}

/** Per-layer word lists under the x-ray lens; keys are always present. */
export interface XrayJson {
  super_concepts: string[];
  concepts: string[];
  descriptors: string[];
  base_words: string[];
  topics: string[];
  documents: string[];
}

export interface JobJson {
  kind?: string;
  status: 'idle' | 'running' | 'done' | 'failed';
  progress?: number;
}

export interface ActionResponseJson {
  generation: number;
  hierarchy_hash: string;
}

export interface ReviewResponseJson {
  generation: number;
  next: RecommendationJson | null;
}
