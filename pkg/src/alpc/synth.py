"""Seeded multi-view Gaussian mixtures with known labels."""
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .errors import ValidationError
from .types import MultiViewDataset, validate_dataset


def default_view_dims(n_views, latent_dim):
    return [max(latent_dim, 8) + 4 * v for v in range(n_views)]


@dataclass
class SynthSpec:
    n: int = 1000
    c: int = 5
    l: int = 3
    latent_dim: Optional[int] = None
    view_dims: Optional[List[int]] = None
    separation: float = 10.0
    noise_sigma: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.latent_dim is None:
            self.latent_dim = self.c
        if self.view_dims is None:
            self.view_dims = default_view_dims(self.l, self.latent_dim)
        self.view_dims = list(self.view_dims)

    def check(self):
        if self.c < 2 or self.n < self.c:
            raise ValidationError(f"need n >= c >= 2, got n={self.n}, c={self.c}")
        if self.l < 1 or len(self.view_dims) != self.l:
            raise ValidationError(f"expected {self.l} view dims, got {self.view_dims}")
        if self.latent_dim < 1 or min(self.view_dims) < 1:
            raise ValidationError("all dimensions must be at least 1")
        if not self.separation > 0 or not self.noise_sigma > 0:
            raise ValidationError("separation and noise_sigma must be positive")


def _orthonormal(rng, rows, cols):
    """Random ``rows x cols`` map with orthonormal columns (or rows if wide)."""
    g = rng.standard_normal((max(rows, cols), min(rows, cols)))
    q, r = np.linalg.qr(g)
    q = q * np.sign(np.diag(r))
    return q if rows >= cols else q.T


def _cluster_means(rng, c, latent_dim, min_dist):
    if latent_dim >= c:
        # Scaled simplex vertices: every pair exactly min_dist apart.
        means = np.eye(c) * (min_dist / np.sqrt(2.0))
        return _orthonormal(rng, latent_dim, c) @ means
    # Too few latent dimensions for a regular simplex: rejection-sample.
    scale = min_dist * c
    for _ in range(10000):
        means = rng.uniform(-scale, scale, size=(latent_dim, c))
        d = np.linalg.norm(means[:, :, None] - means[:, None, :], axis=0)
        if np.all(d[np.triu_indices(c, 1)] >= min_dist):
            return means
    raise ValidationError("could not place cluster means; increase latent_dim")


def generate(spec):
    """Draw a labelled multi-view dataset from ``spec``.

    Samples are assigned to clusters round-robin, so cluster sizes differ
    by at most one. Each view applies its own random orthonormal map to the
    latent points and adds isotropic noise.
    """
    spec.check()
    rng = np.random.default_rng(spec.seed)
    sigma = spec.noise_sigma
    means = _cluster_means(rng, spec.c, spec.latent_dim, spec.separation * sigma)
    labels = np.arange(spec.n) % spec.c
    latent = means[:, labels] + sigma * rng.standard_normal((spec.latent_dim, spec.n))
    views = []
    for d in spec.view_dims:
        w = _orthonormal(rng, d, spec.latent_dim)
        views.append(w @ latent + sigma * rng.standard_normal((d, spec.n)))
    data = MultiViewDataset(views, spec.c, labels)
    validate_dataset(data)
    return data
