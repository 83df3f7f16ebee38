"""Multi-view entropy-regularized fuzzy clustering (AMVFCM-U / AAMVFCM-U)."""

from ._core import (
    Error,
    __version__,
    compute_delta,
    fit_aamvfcm,
    fit_amvfcm,
    minmax_normalize,
    pair_counts,
    scores,
    synthetic,
)

__all__ = [
    "Error",
    "__version__",
    "compute_delta",
    "fit_aamvfcm",
    "fit_amvfcm",
    "minmax_normalize",
    "pair_counts",
    "scores",
    "synthetic",
]
