import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from alpc.linalg import polar_factor  # noqa: E402
from alpc.synth import SynthSpec, generate  # noqa: E402
from alpc.types import Hyperparams, ModelState, MultiViewDataset  # noqa: E402

DOCS = Path(__file__).resolve().parent.parent / "docs"


def random_instance(seed, n=8, c=2, m=1, dims=(3, 4), lambda1=1.0, lambda2=0.1):
    """Random dataset and fully populated state with orthonormal bases."""
    rng = np.random.default_rng(seed)
    k = m * c
    views = [rng.standard_normal((d, n)) for d in dims]
    data = MultiViewDataset(views, c)
    state = ModelState(
        anchors=[rng.standard_normal((d, k)) for d in dims],
        bases=[polar_factor(rng.standard_normal((d, c))) for d in dims],
        graph=rng.standard_normal((k, n)),
        anchor_indicator=rng.standard_normal((c, k)),
        data_indicator=rng.standard_normal((c, n)),
    )
    hp = Hyperparams(lambda1=lambda1, lambda2=lambda2, anchors_per_cluster=m)
    return data, state, hp


def random_problem(seed, max_iter=40):
    """Random dataset with n <= 200, l <= 3, c <= 5 and random hyperparameters."""
    rng = np.random.default_rng(seed)
    c = int(rng.integers(2, 6))
    n = int(rng.integers(max(3 * c, 20), 201))
    dims = [int(d) for d in rng.integers(2, 15, size=rng.integers(1, 4))]
    data = MultiViewDataset([rng.standard_normal((d, n)) for d in dims], c)
    hp = Hyperparams(lambda1=float(10.0 ** rng.integers(-2, 3)), lambda2=float(10.0 ** rng.integers(-4, 1)),
                     anchors_per_cluster=int(rng.integers(1, 4)), max_iter=max_iter, seed=seed)
    return data, hp


@pytest.fixture(scope="session")
def separable_data():
    """The end-to-end dataset: n=1000, c=5, three views, separation 10."""
    return generate(SynthSpec(n=1000, c=5, l=3, separation=10.0, seed=0))


@pytest.fixture(scope="session")
def schema_dir():
    return DOCS / "schemas"


def pytest_terminal_summary(terminalreporter):
    lines = []
    for key in ("passed", "failed"):
        for rep in terminalreporter.stats.get(key, []):
            lines += [v for k, v in getattr(rep, "user_properties", []) if k == "acceptance"]
    if lines:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
