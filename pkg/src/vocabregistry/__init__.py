"""Community vocabulary registry: reputation-weighted consensus ranking over
crowd-contributed metadata terms, with RDF/SKOS import-export, source
auditing, ARK identifiers, and an HTTP service.
"""

from .config import ServiceConfig, load_config
from .models import (
    Comment,
    Term,
    TermStatus,
    TermVersion,
    Triple,
    User,
    Vote,
    VoteDirection,
)
from .scoring import (
    Thresholds,
    applicability_decay,
    classify,
    raw_score,
    reputation,
    stability_update,
    vote_weight,
    weighted_score,
)
from .store import Store

__version__ = "0.1.0"

__all__ = [
    "Comment",
    "ServiceConfig",
    "Store",
    "Term",
    "TermStatus",
    "TermVersion",
    "Thresholds",
    "Triple",
    "User",
    "Vote",
    "VoteDirection",
    "applicability_decay",
    "classify",
    "load_config",
    "raw_score",
    "reputation",
    "stability_update",
    "vote_weight",
    "weighted_score",
    "__version__",
]
