import numpy as np
import pytest

from censtail import CensoredSample, sort_with_concomitants


def make_censored(rng, n=None, censor_prob=0.3, allow_ties=False):
    """Random right-censored sample with a heavy-tailed value column."""
    if n is None:
        n = int(rng.integers(5, 501))
    z = rng.pareto(1.5, size=n) + rng.uniform(0.1, 1.0)
    if allow_ties and n >= 4 and rng.random() < 0.5:
        idx = rng.integers(0, n, size=max(2, n // 4))
        z[idx] = z[idx[0]]
    delta = (rng.random(n) >= censor_prob).astype(int)
    return sort_with_concomitants(CensoredSample(z, delta))


def make_complete(rng, n=None, allow_ties=False):
    sample = make_censored(rng, n=n, censor_prob=0.0, allow_ties=allow_ties)
    return sample


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
