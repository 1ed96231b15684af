"""E-mail network metrics for distributed project teams."""

import json

from ._core import (
    ConfigError,
    InputError,
    MetricError,
    PipelineError,
    VmirrorError,
    __version__,
    betweenness,
    betweenness_centralization,
    contribution_index,
    correlate,
    count_handovers,
    degree_centralization,
    generate_course,
    normalize_address,
    parse_message_csv_text,
    parse_mbox_text,
    pearson,
    sentiment_score,
    significance_stars,
    two_tailed_p,
)
from ._core import analyze as _analyze


def analyze(config, overrides=()):
    """Run the full pipeline; returns rows, the manifest dict and written files."""
    out = _analyze(str(config), list(overrides))
    return {
        "rows": out["rows"],
        "manifest": json.loads(out["manifest_json"]),
        "files": [str(f) for f in out["files"]],
    }
