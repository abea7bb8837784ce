"""Authorship vs. acknowledgment credit analysis for scholarly corpora."""

__version__ = "0.1.0"

from .corpus import (
    AckEntry,
    AuthorEntry,
    Corpus,
    CorpusError,
    EmptyCorpusError,
    GenderLabel,
    PaperRecord,
    ScholarProfile,
    contributor_counts,
    load_corpus,
    load_scholars,
    validate,
    write_corpus,
)
from .credit import (
    ACK_ROLES,
    AUTHORSHIP_ROLES,
    SHARED_ROLES,
    CreditMapping,
    Role,
    UnmappedRoleError,
    author_roles,
    map_credit,
)
from .ack import (
    AckTaxonomy,
    DisambiguationRule,
    RoleAssignment,
    assign_roles,
    classify_sentence,
)
from .gender import (
    GenderCache,
    GenderDictionary,
    GenderServiceClient,
    annotate_corpus,
    infer_gender,
    is_initial_only,
)
from .metrics import (
    ArObservation,
    ContributionEvent,
    PairObservation,
    ack_by_author_count,
    build_events,
    collaboration_ar,
    paper_level_ar,
    relative_difference,
    role_proportions,
)
from .stats import (
    TestKind,
    TestResult,
    chi_square,
    mean_ci,
    t_test_independent,
    t_test_paired,
)
from .strata import (
    PairType,
    StatusTier,
    ar_by_pair_type,
    classify_pairs,
    eligible_scholars,
    stratify,
)
from .synth import GroundTruth, SynthConfig, generate, template_ack_sentence
