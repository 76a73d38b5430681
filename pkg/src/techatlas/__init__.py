"""techatlas: a patent technology-space atlas for design ideation.

Builds a knowledge-proximity network over IPC-defined technology
fields from a patent corpus, positions keyword queries on it, ranks
unexplored fields by proximity to the query's footprint, serves term /
document / field stimuli, and keeps an append-only idea ledger ranked
by source-to-target proximity.
"""

from .artifact import BuildConfig, IndexArtifact, build_artifact, load_artifact
from .atlas import TechSpaceGraph, backbone_filter, build_graph, compute_layout
from .corpus import (
    CorpusError,
    CorpusIndex,
    IpcCode,
    PatentRecord,
    build_corpus_index,
    field_of,
    load_corpus,
    parse_record,
)
from .explorer import (
    DomainPosition,
    FieldPanel,
    field_panel,
    position_domain,
    rank_nearby,
    top_actors,
    top_patents,
)
from .ideation import IdeaDraft, IdeaLedger, IdeaRecord, rank_ideas, render_idea
from .proximity import (
    ProximityMatrix,
    build_proximity_matrix,
    citation_profile,
    domain_proximity,
    knowledge_proximity,
)
from .terms import extract_terms, rank_terms, term_frequencies

__version__ = "0.1.0"

__all__ = [
    "BuildConfig",
    "CorpusError",
    "CorpusIndex",
    "DomainPosition",
    "FieldPanel",
    "IdeaDraft",
    "IdeaLedger",
    "IdeaRecord",
    "IndexArtifact",
    "IpcCode",
    "PatentRecord",
    "ProximityMatrix",
    "TechSpaceGraph",
    "backbone_filter",
    "build_artifact",
    "build_corpus_index",
    "build_graph",
    "build_proximity_matrix",
    "citation_profile",
    "compute_layout",
    "domain_proximity",
    "extract_terms",
    "field_of",
    "field_panel",
    "knowledge_proximity",
    "load_artifact",
    "load_corpus",
    "parse_record",
    "position_domain",
    "rank_ideas",
    "rank_nearby",
    "rank_terms",
    "render_idea",
    "term_frequencies",
    "top_actors",
    "top_patents",
]
