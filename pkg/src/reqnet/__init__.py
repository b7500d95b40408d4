"""reqnet: mine feature-request corpora into noun co-occurrence networks
and compare popularity (degree), importance (closeness) and influence
(clustering) tiers with nonparametric tests."""

__version__ = "0.1.0"

from .corpus import (  # noqa: F401
    CorpusSnapshot,
    IssueRecord,
    ReleaseStats,
    ReleaseWindow,
    clean_text,
    filter_by_type,
    parse_records,
    partition_by_release,
)
from .features import (  # noqa: F401
    DocumentFeatures,
    HeuristicTagger,
    PairCounts,
    PretaggedTagger,
    TaggedToken,
    UnigramCounts,
    extract_features,
    pair_document_frequency,
    pmi_score,
    tag_tokens,
    tokenize,
    unigram_document_frequency,
)
from .graph import (  # noqa: F401
    FeatureGraph,
    VertexMetrics,
    build_graph,
    closeness_all,
    clustering_all,
    compute_metrics,
    connected_components,
    degree_all,
    export_graph,
)
from .community import (  # noqa: F401
    CommunityPartition,
    detect_communities_cnm,
    modularity,
)
from .stats import (  # noqa: F401
    ReliabilityInput,
    Sample,
    TestResult,
    chi_square_survival,
    descriptive,
    holsti,
    kruskal_wallis,
    mann_whitney,
    shapiro_wilk,
)
from .report import (  # noqa: F401
    TierAssignment,
    build_report,
    tertile_partition,
    top_k,
)
from .pipeline import PipelineConfig, PipelineResult, run_pipeline  # noqa: F401
