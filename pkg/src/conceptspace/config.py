"""Central configuration with the pipeline's default parameters.

All knobs live here so a session can dump its effective configuration
for reproducibility.
"""

from dataclasses import dataclass, field, asdict


@dataclass
class Config:
    # clustering
    eps_similarity: float = 0.4
    eps_neighborhood: int = 6
    super_factor: float = 1.5

    # projection
    perplexity: float = 5.0
    theta: float = 0.5
    iterations: int = 5000
    learning_rate: float = 200.0
    seed: int = 0

    # keyword budgets
    top_doc_keywords: int = 15
    top_topic_keywords: int = 15
    doc_keywords_for_concepts: int = 20

    # recommendation
    recommendation_pool: int = 50

    # concept generation
    n_seeds: int = 10
    expansion_width: int = 30
    scoring_function: str = "G2"

    # topic model
    attach_threshold: float = 0.6
    sigma_related: float = 0.5
    rho_fraction: float = 0.25  # of the viewport diagonal

    # level multiplier ladder
    multipliers: dict = field(default_factory=lambda: {
        "BASE": 1.0,
        "DESCRIPTOR": 1.5,
        "CONCEPT": 2.5,
        "SUPER_CONCEPT": 4.0,
        "DEMOTED": 0.25,
    })

    def dump(self) -> dict:
        return asdict(self)


DEFAULTS = Config()
