"""Tail-index estimators for right-censored Pareto-type data.

Every estimator is a function of the sorted sample and the number k of top
order statistics entering the tail fit.  The observations above the
threshold order statistic (the (n-k)-th from below) carry the information;
k trades bias (large k) against variance (small k).

``estimate_path`` evaluates a whole set of estimators over a grid of k in
one pass, reusing the cumulative-hazard precomputation shared by all of
them.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isnan

import numpy as np

from .errors import (
    DegenerateP,
    InvalidK,
    KernelAxiomViolation,
    ZeroSurvivalAtThreshold,
)
from .samples import Table
from .survival import kaplan_meier_curve, nelson_aalen_curve

ESTIMATOR_NAMES = ("hill", "p_hat", "efg", "worms", "mns")

KERNEL_COLUMN_PREFIX = "kernel_"


def _check_k(k, n, allow_n=False):
    limit = n if allow_n else n - 1
    if not isinstance(k, (int, np.integer)):
        raise InvalidK(f"k must be an integer, got {k!r}")
    if not 1 <= k <= limit:
        raise InvalidK(f"k must satisfy 1 <= k <= {limit} (n = {n}), got {k}")
    return int(k)


def _check_kernel(kernel):
    if not getattr(kernel, "verified", False):
        raise KernelAxiomViolation(
            f"kernel {kernel.name!r} has not passed the axiom checks; "
            "use a built-in kernel or censtail.kernels.custom_kernel"
        )
    return kernel


class _TailArrays:
    """Per-sample precomputation shared by every estimator.

    Holds the logs of the order statistics and the Kaplan-Meier and
    Nelson-Aalen survival values evaluated at each order statistic
    (tie-aware, following each curve's own convention at a jump point).
    """

    def __init__(self, sample):
        self.n = sample.n
        self.z = sample.z
        self.delta = sample.delta.astype(float)
        self.logz = np.log(sample.z)
        self.na_at = nelson_aalen_curve(sample).survival(sample.z)
        self.km_at = kaplan_meier_curve(sample).survival(sample.z)

    def hill(self, k):
        n = self.n
        return float(np.mean(self.logz[n - k:]) - self.logz[n - k - 1])

    def p_hat(self, k):
        return float(np.mean(self.delta[self.n - k:]))

    def efg(self, k):
        p = self.p_hat(k)
        if p == 0.0:
            raise DegenerateP(f"all {k} top observations are censored")
        return self.hill(k) / p

    def worms(self, k):
        n = self.n
        threshold_survival = self.km_at[n - k - 1]
        if threshold_survival == 0.0:
            raise ZeroSurvivalAtThreshold(
                "Kaplan-Meier survival vanishes at the threshold order statistic"
            )
        weights = self.km_at[n - k - 1:n - 1]
        log_spacings = np.diff(self.logz[n - k - 1:])
        return float(np.sum(weights * log_spacings) / threshold_survival)

    def mns(self, k):
        n = self.n
        d = self.delta[n - k:][::-1]
        ratios = self.na_at[n - k:][::-1] / self.na_at[n - k - 1]
        logs = self.logz[n - k:][::-1] - self.logz[n - k - 1]
        i = np.arange(1, k + 1, dtype=float)
        return float(np.sum((d / i) * ratios * logs))

    def kernel(self, k, kern):
        n = self.n
        d = self.delta[n - k:][::-1]
        ratios = self.na_at[n - k:][::-1] / self.na_at[n - k - 1]
        logs = self.logz[n - k:][::-1] - self.logz[n - k - 1]
        i = np.arange(1, k + 1, dtype=float)
        return float(np.sum((d / i) * ratios * kern.g_prime(ratios) * logs))


def hill(sample, k):
    """Hill estimator of the tail index of the observed sample.

    Average of log(Z_{n-i+1:n} / Z_{n-k:n}) over the k largest order
    statistics; under censoring it targets the tail index of Z, not the one
    of the variable of interest.
    """
    k = _check_k(k, sample.n)
    return _TailArrays(sample).hill(k)


def p_hat(sample, k):
    """Proportion of uncensored observations among the k largest."""
    k = _check_k(k, sample.n, allow_n=True)
    return _TailArrays(sample).p_hat(k)


def efg(sample, k):
    """Hill estimator divided by the top-k uncensored proportion.

    Raises
    ------
    DegenerateP
        When every one of the k largest observations is censored.
    """
    k = _check_k(k, sample.n)
    return _TailArrays(sample).efg(k)


def worms(sample, k):
    """Kaplan-Meier weighted sum of consecutive log-spacings.

    Sums F_KM-bar(Z_{n-i:n}) / F_KM-bar(Z_{n-k:n}) * log(Z_{n-i+1:n}/Z_{n-i:n})
    for i = 1..k.  On complete data this telescopes to the Hill estimator.

    Raises
    ------
    ZeroSurvivalAtThreshold
        When the Kaplan-Meier survival at the threshold is exactly zero
        (only possible with ties at an uncensored maximum).
    """
    k = _check_k(k, sample.n)
    return _TailArrays(sample).worms(k)


def mns(sample, k):
    """Nelson-Aalen weighted tail-index estimator.

    Sums (delta_{[n-i+1:n]} / i) * R_i * log(Z_{n-i+1:n}/Z_{n-k:n}) for
    i = 1..k, where R_i is the Nelson-Aalen survival at Z_{n-i+1:n} divided
    by its value at the threshold Z_{n-k:n}.  The Nelson-Aalen survival is
    strictly positive, so there is no division hazard.
    """
    k = _check_k(k, sample.n)
    return _TailArrays(sample).mns(k)


def kernel_estimator(sample, k, kernel):
    """Kernel-smoothed Nelson-Aalen tail-index estimator.

    Parameters
    ----------
    sample : SortedCensoredSample
    k : int
        Number of top order statistics, 1 <= k <= n-1.
    kernel : Kernel
        Weight function; must satisfy the kernel axioms (built-ins do, and
        :func:`censtail.kernels.custom_kernel` verifies user kernels).

    Returns
    -------
    float
        Sum over i = 1..k of (delta_{[n-i+1:n]} / i) * R_i * g'(R_i) *
        log(Z_{n-i+1:n}/Z_{n-k:n}) with R_i the Nelson-Aalen survival ratio.
        With the indicator kernel this reduces exactly to :func:`mns`,
        because g' is 1 on the whole closed interval [0, 1] of possible
        ratios.
    """
    k = _check_k(k, sample.n)
    _check_kernel(kernel)
    return _TailArrays(sample).kernel(k, kernel)


@dataclass(frozen=True)
class EstimatePath:
    """Estimator values along an ascending grid of k.

    ``estimates`` maps a column name to a tuple aligned with ``k_values``;
    cells where an estimator is undefined (e.g. all top-k observations
    censored for ``efg``) hold None, never NaN.
    """

    k_values: tuple
    estimates: dict

    def __post_init__(self):
        k_values = tuple(int(k) for k in self.k_values)
        if any(k < 1 for k in k_values):
            raise InvalidK("all k values must be >= 1")
        if any(b <= a for a, b in zip(k_values, k_values[1:])):
            raise InvalidK("k values must be strictly ascending")
        estimates = {}
        for name, column in self.estimates.items():
            column = tuple(column)
            if len(column) != len(k_values):
                raise ValueError(f"column {name!r} length mismatch")
            if any(v is not None and isnan(v) for v in column):
                raise ValueError(f"column {name!r} stores NaN; use None")
            estimates[str(name)] = column
        object.__setattr__(self, "k_values", k_values)
        object.__setattr__(self, "estimates", estimates)

    def column(self, name):
        return self.estimates[name]

    def to_table(self):
        """Tabulate as columns k, <estimator>, ... in insertion order."""
        names = list(self.estimates)
        rows = tuple(
            (k, *(self.estimates[name][j] for name in names))
            for j, k in enumerate(self.k_values)
        )
        return Table(("k", *names), rows)


def estimate_path(sample, k_values, estimators=ESTIMATOR_NAMES, kernels=()):
    """Evaluate a set of estimators over a grid of k in one pass.

    Parameters
    ----------
    sample : SortedCensoredSample
    k_values : iterable of int
        Strictly ascending, all within [1, n-1].
    estimators : iterable of str
        Any of "hill", "p_hat", "efg", "worms", "mns".
    kernels : iterable of Kernel
        Each adds a column named ``kernel_<name>``.

    Returns
    -------
    EstimatePath
        Cells where an estimator raises a degeneracy error (DegenerateP,
        ZeroSurvivalAtThreshold) are None; invalid k is a hard error.
    """
    n = sample.n
    k_list = [_check_k(k, n) for k in k_values]
    if any(b <= a for a, b in zip(k_list, k_list[1:])):
        raise InvalidK("k grid must be strictly ascending")
    names = [str(e) for e in estimators]
    for name in names:
        if name not in ESTIMATOR_NAMES:
            raise ValueError(
                f"unknown estimator {name!r}; choose from {ESTIMATOR_NAMES}"
            )
    kernels = tuple(_check_kernel(kern) for kern in kernels)
    arrays = _TailArrays(sample)
    columns = {}
    for name in names:
        fn = getattr(arrays, name)
        columns[name] = tuple(_cell(fn, k) for k in k_list)
    for kern in kernels:
        fn = lambda k, kern=kern: arrays.kernel(k, kern)
        columns[KERNEL_COLUMN_PREFIX + kern.name] = tuple(_cell(fn, k) for k in k_list)
    return EstimatePath(tuple(k_list), columns)


def _cell(fn, k):
    try:
        return fn(k)
    except (DegenerateP, ZeroSurvivalAtThreshold):
        return None
