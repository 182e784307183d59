"""Multi-view clustering by anchor learning under cluster constraints."""

__version__ = "0.1.0"

from .errors import AlpcError  # noqa: E402
from .types import ClusteringResult, FitReport, Hyperparams, ModelState, MultiViewDataset, validate  # noqa: E402
from .solver import SolverConfig, Variant, fit, fit_baseline, objective  # noqa: E402

__all__ = [
    "AlpcError",
    "ClusteringResult",
    "FitReport",
    "Hyperparams",
    "ModelState",
    "MultiViewDataset",
    "SolverConfig",
    "Variant",
    "fit",
    "fit_baseline",
    "objective",
    "validate",
]
