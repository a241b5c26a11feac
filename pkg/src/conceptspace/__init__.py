"""conceptspace: human-in-the-loop topic model refinement through an
editable semantic concept space."""

from .config import Config, DEFAULTS
from .corpus import (CorpusStats, Document, ScoringFunction, load_corpus,
                     score_keywords, top_keywords)
from .embeddings import (EmbeddingStore, HierarchyLevel, WeightStore,
                         WeightedWordVector, load_embeddings)
from .conceptgen import (ConceptVector, Descriptor, Provenance,
                         apply_user_edits, expand_concept_vector,
                         extract_seed_concepts, generate_concepts,
                         rank_descriptors)
from .spatialization import (Projection2D, TsneParams,
                             gather_projection_input, initial_anchor_pass,
                             tsne_project)
from .quadtree import QuadTree
from .hierarchy import (AbstractionParams, ConceptHierarchy,
                        build_hierarchy, cluster_level,
                        effective_neighborhood, rebuild_super_concepts)
from .layout import (CanvasObject, VoronoiDiagram, assign_colors,
                     color_conflicts, reduce_overlap, rescale, voronoi)
from .topicmodel import (TopicCase, TopicGlyph, TopicHierarchy, classify,
                         glyph, quality_metrics, reweight_from_concepts,
                         train)
from .refinement import (ActionKind, QualityReport, Recommendation,
                         RefinementAction, TourState, apply, build_queue,
                         monitor, step_tour)
from .session import Session, hierarchy_hash

__version__ = "0.1.0"
