"""Heavy-tailed loss and censoring models with inverse-transform sampling.

The simulation design draws losses from a Burr distribution (or plain
Pareto for complete-data checks) and censors them by an independent Frechet
variable; all three have closed-form quantile functions, so sampling is a
pure function of uniform draws from a counter-based generator, which makes
parallel and serial runs bit-identical.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .samples import CensoredSample


def _as_prob(u, lo_open, name="u"):
    arr = np.asarray(u, dtype=float)
    low_bad = (arr <= 0.0) if lo_open else (arr < 0.0)
    if np.any(low_bad) or np.any(arr >= 1.0) or not np.all(np.isfinite(arr)):
        lo = "(0, 1)" if lo_open else "[0, 1)"
        raise DomainError(f"{name} must lie in {lo}")
    return arr


def _scalar_like(u, out):
    if np.ndim(u) == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class Burr:
    """Burr distribution with F(x) = 1 - (1 + x^(1/eta))^(-eta/gamma1).

    Regularly varying with tail index ``gamma1``; ``eta`` controls the
    second-order behavior of the tail.
    """

    gamma1: float
    eta: float

    def __post_init__(self):
        if not (self.gamma1 > 0 and np.isfinite(self.gamma1)):
            raise DomainError(f"gamma1 must be positive, got {self.gamma1}")
        if not (self.eta > 0 and np.isfinite(self.eta)):
            raise DomainError(f"eta must be positive, got {self.eta}")

    @property
    def tail_index(self):
        return self.gamma1

    def cdf(self, x):
        arr = np.maximum(np.asarray(x, dtype=float), 0.0)
        out = 1.0 - (1.0 + arr ** (1.0 / self.eta)) ** (-self.eta / self.gamma1)
        return _scalar_like(x, out)

    def quantile(self, u):
        arr = _as_prob(u, lo_open=False)
        out = ((1.0 - arr) ** (-self.gamma1 / self.eta) - 1.0) ** self.eta
        return _scalar_like(u, out)


@dataclass(frozen=True)
class Pareto:
    """Pareto distribution with F(x) = 1 - x^(-1/gamma1) for x >= 1.

    An exact power tail: the second-order bias function vanishes
    identically, which makes it the reference model for normality checks.
    """

    gamma1: float

    def __post_init__(self):
        if not (self.gamma1 > 0 and np.isfinite(self.gamma1)):
            raise DomainError(f"gamma1 must be positive, got {self.gamma1}")

    @property
    def tail_index(self):
        return self.gamma1

    def cdf(self, x):
        arr = np.maximum(np.asarray(x, dtype=float), 1.0)
        out = 1.0 - arr ** (-1.0 / self.gamma1)
        return _scalar_like(x, out)

    def quantile(self, u):
        arr = _as_prob(u, lo_open=False)
        out = (1.0 - arr) ** (-self.gamma1)
        return _scalar_like(u, out)


@dataclass(frozen=True)
class Frechet:
    """Frechet distribution with G(x) = exp(-x^(-1/gamma2)) for x > 0."""

    gamma2: float

    def __post_init__(self):
        if not (self.gamma2 > 0 and np.isfinite(self.gamma2)):
            raise DomainError(f"gamma2 must be positive, got {self.gamma2}")

    @property
    def tail_index(self):
        return self.gamma2

    def cdf(self, x):
        arr = np.asarray(x, dtype=float)
        out = np.zeros(arr.shape)
        positive = arr > 0
        out[positive] = np.exp(-arr[positive] ** (-1.0 / self.gamma2))
        return _scalar_like(x, out)

    def quantile(self, u):
        arr = _as_prob(u, lo_open=True)
        out = (-np.log(arr)) ** (-self.gamma2)
        return _scalar_like(u, out)


def burr_quantile(u, gamma1, eta):
    """Inverse of the Burr cdf: ((1-u)^(-gamma1/eta) - 1)^eta, u in [0, 1)."""
    return Burr(gamma1, eta).quantile(u)


def frechet_quantile(u, gamma2):
    """Inverse of the Frechet cdf: (-log u)^(-gamma2), u in (0, 1)."""
    return Frechet(gamma2).quantile(u)


def pareto_quantile(u, gamma1):
    """Inverse of the Pareto cdf: (1-u)^(-gamma1), u in [0, 1)."""
    return Pareto(gamma1).quantile(u)


def gamma2_from_p(gamma1, p):
    """Censoring tail index giving upper uncensored proportion p.

    Solves p = gamma2 / (gamma1 + gamma2); p = 1 has no finite solution
    (complete data is modeled by censor=None instead).
    """
    if not (gamma1 > 0 and np.isfinite(gamma1)):
        raise DomainError(f"gamma1 must be positive, got {gamma1}")
    if not 0.0 < p < 1.0:
        raise DomainError(f"p must lie strictly between 0 and 1, got {p}")
    return p * gamma1 / (1.0 - p)


def upper_uncensored_proportion(gamma1, gamma2):
    """Limiting proportion gamma2 / (gamma1 + gamma2) of uncensored top
    observations under independent Pareto-type censoring."""
    return gamma2 / (gamma1 + gamma2)


@dataclass(frozen=True)
class ModelSpec:
    """A loss model optionally right-censored by an independent Frechet.

    ``censor=None`` means complete data (every indicator is 1).
    """

    loss: Burr | Pareto
    censor: Frechet | None = None

    @property
    def gamma1(self):
        return self.loss.tail_index

    @property
    def p(self):
        """Limiting uncensored proportion among top observations."""
        if self.censor is None:
            return 1.0
        return upper_uncensored_proportion(self.loss.tail_index, self.censor.gamma2)


@dataclass(frozen=True)
class RngStream:
    """One substream of a counter-based random generator.

    Distinct ``stream_index`` values under the same ``master_seed`` yield
    statistically independent streams, and a given pair always reproduces
    the same draws, regardless of what other streams are consumed.
    """

    master_seed: int
    stream_index: int = 0

    def __post_init__(self):
        if not 0 <= int(self.master_seed) < 2**64:
            raise DomainError("master_seed must be an unsigned 64-bit integer")
        if not 0 <= int(self.stream_index) < 2**64:
            raise DomainError("stream_index must be an unsigned 64-bit integer")

    def generator(self):
        """A fresh numpy Generator positioned at the start of the stream."""
        key = (int(self.stream_index) << 64) | int(self.master_seed)
        return np.random.Generator(np.random.Philox(key=key))


def _open_unit(gen, size):
    """Uniform draws in the open interval (0, 1); exact zeros are redrawn so
    the quantile transforms can never produce a zero or infinite value."""
    u = gen.random(size)
    while True:
        zero = u == 0.0
        if not zero.any():
            return u
        u[zero] = gen.random(int(zero.sum()))


def sample_censored(spec, n, rng):
    """Draw a censored sample of size n from a model specification.

    Losses and censoring values are drawn independently through their
    quantile transforms; each observation is the minimum of the two with an
    indicator telling whether the loss itself was observed.  The loss
    uniforms are consumed before the censoring uniforms, so the output is a
    deterministic function of ``(spec, n, rng)``.
    """
    if n < 1:
        raise DomainError(f"sample size must be >= 1, got {n}")
    gen = rng.generator()
    x = spec.loss.quantile(_open_unit(gen, n))
    if spec.censor is None:
        return CensoredSample(x, np.ones(n, dtype=np.int8))
    c = spec.censor.quantile(_open_unit(gen, n))
    z = np.minimum(x, c)
    delta = (x <= c).astype(np.int8)
    return CensoredSample(z, delta)
