import numpy as np
import pytest

from alpc.errors import ValidationError
from alpc.kmeans import kmeans
from alpc.metrics import accuracy
from alpc.synth import SynthSpec, generate


def test_deterministic():
    a = generate(SynthSpec(n=200, seed=3))
    b = generate(SynthSpec(n=200, seed=3))
    assert a == b
    assert a != generate(SynthSpec(n=200, seed=4))


def test_shapes_follow_settings():
    data = generate(SynthSpec(n=50, c=3, l=2, view_dims=[7, 11]))
    assert data.view_dims == [7, 11] and data.n_samples == 50 and data.n_clusters == 3


@pytest.mark.parametrize("n, c", [(100, 5), (101, 5), (7, 3)])
def test_round_robin_balance(n, c):
    counts = np.bincount(generate(SynthSpec(n=n, c=c)).labels, minlength=c)
    assert counts.max() - counts.min() <= 1


@pytest.mark.parametrize("latent_dim", [None, 2])
def test_latent_means_separated(latent_dim):
    spec = SynthSpec(n=4000, c=4, l=1, latent_dim=latent_dim, separation=6.0, noise_sigma=0.5,
                     view_dims=[12])
    data = generate(spec)
    # with an orthonormal map and noise in every direction, the sample means
    # keep roughly the latent spacing
    means = np.stack([data.views[0][:, data.labels == k].mean(axis=1) for k in range(4)], axis=1)
    d = np.linalg.norm(means[:, :, None] - means[:, None, :], axis=0)
    assert d[np.triu_indices(4, 1)].min() >= 0.9 * spec.separation * spec.noise_sigma


@pytest.mark.parametrize("seed", range(3))
def test_kmeans_sanity_at_separation_50(seed):
    data = generate(SynthSpec(n=400, c=2, l=1, separation=50.0, seed=seed))
    res = kmeans(data.views[0], 2, restarts=10, seed=seed)
    assert accuracy(res.labels, data.labels) >= 0.99


@pytest.mark.parametrize("kwargs", [dict(c=1), dict(n=3, c=4), dict(separation=0.0),
                                    dict(noise_sigma=-1.0), dict(l=2, view_dims=[3])])
def test_invalid_settings(kwargs):
    with pytest.raises(ValidationError):
        generate(SynthSpec(**kwargs))
