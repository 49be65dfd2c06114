"""Empirical distribution curves and product-limit survival estimators.

Four step curves are derived from a sorted censored sample: the empirical
distribution of the observed values, the empirical sub-distribution of the
uncensored values, and the Kaplan-Meier and Nelson-Aalen estimators of the
underlying (uncensored) distribution.  All four are represented by the same
:class:`StepCurve` container and differ only in their jump values and in the
evaluation convention at a jump point.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .samples import Table, _freeze


@dataclass(frozen=True)
class StepCurve:
    """Nonincreasing step function on (0, inf) starting at 1.

    Parameters
    ----------
    jump_points : ndarray
        Ascending positive reals where the curve steps down.
    values_after : ndarray
        Curve value on the interval following each jump, in [0, 1].
    include_at_jump : bool
        Evaluation convention at a jump point z: True means the value at z
        already includes the step at z (right-continuous, used by the
        empirical curves and Kaplan-Meier, whose products run over
        observations <= z); False means it does not (left-continuous, used
        by Nelson-Aalen, whose product runs over observations strictly
        below z).
    value_before_first : float
        Constant value to the left of the first jump, always 1.
    """

    jump_points: np.ndarray
    values_after: np.ndarray
    include_at_jump: bool
    value_before_first: float = 1.0

    def __post_init__(self):
        jumps = np.asarray(self.jump_points, dtype=float)
        values = np.asarray(self.values_after, dtype=float)
        if jumps.shape != values.shape or jumps.ndim != 1:
            raise ValueError("jump_points and values_after must be 1-d, equal length")
        if jumps.size and (np.any(jumps <= 0) or np.any(np.diff(jumps) <= 0)):
            raise ValueError("jump_points must be strictly ascending positives")
        if np.any(values < 0) or np.any(values > 1) or np.any(np.diff(values) > 0):
            raise ValueError("values_after must be nonincreasing within [0, 1]")
        object.__setattr__(self, "jump_points", _freeze(jumps))
        object.__setattr__(self, "values_after", _freeze(values))

    def _eval(self, z, side):
        z_arr = np.asarray(z, dtype=float)
        idx = np.searchsorted(self.jump_points, z_arr, side=side)
        table = np.concatenate(([self.value_before_first], self.values_after))
        out = table[idx]
        if np.ndim(z) == 0:
            return float(out)
        return out

    def survival(self, z):
        """Curve value at z (scalar or array) under the curve's convention."""
        return self._eval(z, "right" if self.include_at_jump else "left")

    def survival_before(self, z):
        """Left limit of the curve at z, i.e. the value just below z."""
        return self._eval(z, "left")

    def cdf(self, z):
        """Complement 1 - survival(z)."""
        return 1.0 - self.survival(z)

    def to_table(self):
        """Dump the curve as a (z, survival) table for external plotting."""
        rows = tuple(
            (float(z), float(v)) for z, v in zip(self.jump_points, self.values_after)
        )
        return Table(("z", "survival"), rows)


def _tie_blocks(sample):
    """Unique observed values and the (start, end) index range of each tie
    block in the sorted sample; end is one past the last index."""
    uniq, start = np.unique(sample.z, return_index=True)
    end = np.concatenate((start[1:], [sample.n]))
    return uniq, start, end


def _drop_flat_steps(jumps, values):
    before = np.concatenate(([1.0], values[:-1]))
    keep = values < before
    return jumps[keep], values[keep]


def empirical_H(sample):
    """Empirical distribution of the observed values, as a survival curve.

    The returned curve is the proportion of observations strictly above z;
    its ``cdf`` accessor is the usual empirical distribution function, and
    ``survival_before`` at the i-th order statistic equals (n - i + 1) / n.
    """
    n = sample.n
    uniq, _, end = _tie_blocks(sample)
    values = (n - end) / n
    return StepCurve(uniq, values, include_at_jump=True)


def empirical_H1(sample):
    """Empirical sub-distribution of the uncensored observations.

    The curve jumps by 1/n at each uncensored observation; its ``cdf``
    accessor gives the sub-distribution itself.
    """
    n = sample.n
    uniq, _, end = _tie_blocks(sample)
    cum_unc = np.cumsum(sample.delta)[end - 1]
    jumps, values = _drop_flat_steps(uniq, 1.0 - cum_unc / n)
    return StepCurve(jumps, values, include_at_jump=True)


def kaplan_meier_curve(sample):
    """Kaplan-Meier product-limit estimator of the survival function.

    The product runs over observations at or below the evaluation point
    (right-continuous).  The curve reaches exactly zero when and only when
    the largest observation is uncensored.
    """
    n = sample.n
    positions = np.arange(n)
    ratio = (n - 1.0 - positions) / (n - positions)
    factors = np.where(sample.delta == 1, ratio, 1.0)
    cumulative = np.cumprod(factors)
    uniq, _, end = _tie_blocks(sample)
    jumps, values = _drop_flat_steps(uniq, cumulative[end - 1])
    return StepCurve(jumps, values, include_at_jump=True)


def nelson_aalen_curve(sample):
    """Nelson-Aalen estimator of the survival function.

    Each uncensored observation at rank i contributes a factor
    exp(-1 / (n - i + 1)), and the product runs over observations strictly
    below the evaluation point, so the curve is left-continuous and
    strictly positive everywhere; in particular it is safe as a
    denominator, unlike Kaplan-Meier.
    """
    n = sample.n
    positions = np.arange(n)
    hazard = sample.delta / (n - positions)
    cumulative_hazard = np.cumsum(hazard)
    uniq, _, end = _tie_blocks(sample)
    jumps, values = _drop_flat_steps(uniq, np.exp(-cumulative_hazard[end - 1]))
    return StepCurve(jumps, values, include_at_jump=False)


def kaplan_meier_survival(sample, x):
    """Kaplan-Meier survival at a single point.

    Builds the curve (O(n)) and evaluates once; construct
    :func:`kaplan_meier_curve` directly for repeated evaluation.
    """
    return kaplan_meier_curve(sample).survival(float(x))


def nelson_aalen_survival(sample, z):
    """Nelson-Aalen survival at a single point (strictly positive).

    Builds the curve (O(n)) and evaluates once; construct
    :func:`nelson_aalen_curve` directly for repeated evaluation.
    """
    return nelson_aalen_curve(sample).survival(float(z))
