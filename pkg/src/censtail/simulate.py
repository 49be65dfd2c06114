"""Monte Carlo engine: replicated sampling, estimate paths, aggregation.

Replication r always draws from random substream r of the master seed, and
partial results are merged in replication order, so the outcome depends
only on the configuration and never on scheduling or worker count.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, SimulationError, TooFewPoints, UnknownKernel
from .estimators import ESTIMATOR_NAMES, KERNEL_COLUMN_PREFIX, estimate_path
from .kernels import MomentSpec, asymptotic_variance, builtin_kernel
from .models import Burr, Frechet, ModelSpec, Pareto, RngStream, sample_censored
from .samples import Table, sort_with_concomitants

CONFIG_SCHEMA = "censtail-sim-config/1"
RESULT_SCHEMA = "censtail-sim-result/1"


@dataclass(frozen=True)
class SimulationConfig:
    """Full description of one Monte Carlo experiment.

    ``kernels`` holds built-in kernel names (each adds a
    ``kernel_<name>`` column next to the plain ``estimators``), and
    ``workers`` is a hint only: results are identical for any worker count.
    """

    model: ModelSpec
    n: int
    replications: int
    k_values: tuple
    estimators: tuple = ("efg", "worms", "mns")
    kernels: tuple = ("biweight", "triweight")
    master_seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if not isinstance(self.model, ModelSpec):
            raise ConfigError("model must be a ModelSpec", field="model")
        if self.n < 2:
            raise ConfigError(f"n must be >= 2, got {self.n}", field="n")
        if self.replications < 1:
            raise ConfigError(
                f"replications must be >= 1, got {self.replications}",
                field="replications",
            )
        k_values = tuple(int(k) for k in self.k_values)
        if not k_values:
            raise ConfigError("k_values must be nonempty", field="k_values")
        if any(b <= a for a, b in zip(k_values, k_values[1:])):
            raise ConfigError("k_values must be strictly ascending", field="k_values")
        if k_values[0] < 1 or k_values[-1] > self.n - 1:
            raise ConfigError(
                f"k_values must lie within [1, {self.n - 1}]", field="k_values"
            )
        estimators = tuple(str(e) for e in self.estimators)
        for name in estimators:
            if name not in ESTIMATOR_NAMES:
                raise ConfigError(
                    f"unknown estimator {name!r}", field="estimators"
                )
        try:
            kernels = tuple(builtin_kernel(str(name)).name for name in self.kernels)
        except UnknownKernel as exc:
            raise ConfigError(str(exc), field="kernels") from None
        if not 0 <= int(self.master_seed) < 2**64:
            raise ConfigError(
                "master_seed must be an unsigned 64-bit integer", field="master_seed"
            )
        if self.workers < 1:
            raise ConfigError(
                f"workers must be >= 1, got {self.workers}", field="workers"
            )
        object.__setattr__(self, "k_values", k_values)
        object.__setattr__(self, "estimators", estimators)
        object.__setattr__(self, "kernels", kernels)

    def to_json_dict(self):
        loss = self.model.loss
        if isinstance(loss, Burr):
            loss_doc = {"family": "burr", "gamma1": loss.gamma1, "eta": loss.eta}
        else:
            loss_doc = {"family": "pareto", "gamma1": loss.gamma1}
        censor = self.model.censor
        censor_doc = None if censor is None else {
            "family": "frechet", "gamma2": censor.gamma2,
        }
        return {
            "schema": CONFIG_SCHEMA,
            "model": {"loss": loss_doc, "censor": censor_doc},
            "n": self.n,
            "replications": self.replications,
            "k_values": list(self.k_values),
            "estimators": list(self.estimators),
            "kernels": list(self.kernels),
            "master_seed": self.master_seed,
            "workers": self.workers,
        }

    @classmethod
    def from_json_dict(cls, doc):
        """Parse a configuration document, reporting the offending field
        path in any ConfigError."""
        if not isinstance(doc, dict):
            raise ConfigError("configuration must be a JSON object", field="")
        schema = doc.get("schema", CONFIG_SCHEMA)
        if schema != CONFIG_SCHEMA:
            raise ConfigError(
                f"unsupported schema {schema!r}, expected {CONFIG_SCHEMA!r}",
                field="schema",
            )
        model = _parse_model(_get(doc, "model", dict))
        n = _get(doc, "n", int)
        replications = _get(doc, "replications", int)
        k_values = _parse_k(doc)
        estimators = tuple(doc.get("estimators", ("efg", "worms", "mns")))
        kernels = tuple(doc.get("kernels", ("biweight", "triweight")))
        master_seed = doc.get("master_seed", 0)
        workers = doc.get("workers", 1)
        if not isinstance(master_seed, int):
            raise ConfigError("master_seed must be an integer", field="master_seed")
        if not isinstance(workers, int):
            raise ConfigError("workers must be an integer", field="workers")
        return cls(
            model=model,
            n=n,
            replications=replications,
            k_values=k_values,
            estimators=estimators,
            kernels=kernels,
            master_seed=master_seed,
            workers=workers,
        )


def _get(doc, key, typ, path=""):
    full = f"{path}.{key}" if path else key
    if key not in doc:
        raise ConfigError(f"missing field {full!r}", field=full)
    value = doc[key]
    if typ is int and isinstance(value, bool):
        raise ConfigError(f"field {full!r} must be an integer", field=full)
    if typ is float and isinstance(value, int) and not isinstance(value, bool):
        value = float(value)
    if not isinstance(value, typ):
        raise ConfigError(f"field {full!r} has the wrong type", field=full)
    return value


def _parse_model(doc):
    loss_doc = _get(doc, "loss", dict, path="model")
    family = _get(loss_doc, "family", str, path="model.loss")
    if family == "burr":
        loss = Burr(
            _get(loss_doc, "gamma1", float, path="model.loss"),
            _get(loss_doc, "eta", float, path="model.loss"),
        )
    elif family == "pareto":
        loss = Pareto(_get(loss_doc, "gamma1", float, path="model.loss"))
    else:
        raise ConfigError(
            f"unknown loss family {family!r}", field="model.loss.family"
        )
    censor_doc = doc.get("censor")
    if censor_doc is None:
        censor = None
    else:
        if not isinstance(censor_doc, dict):
            raise ConfigError("censor must be an object or null", field="model.censor")
        family = _get(censor_doc, "family", str, path="model.censor")
        if family != "frechet":
            raise ConfigError(
                f"unknown censor family {family!r}", field="model.censor.family"
            )
        censor = Frechet(_get(censor_doc, "gamma2", float, path="model.censor"))
    return ModelSpec(loss=loss, censor=censor)


def _parse_k(doc):
    if "k_values" in doc:
        values = doc["k_values"]
        if not isinstance(values, list) or not all(isinstance(v, int) for v in values):
            raise ConfigError("k_values must be a list of integers", field="k_values")
        return tuple(values)
    if "k_grid" in doc:
        grid = _get(doc, "k_grid", dict)
        lo = _get(grid, "min", int, path="k_grid")
        hi = _get(grid, "max", int, path="k_grid")
        step = grid.get("step", 1)
        if not isinstance(step, int) or step < 1:
            raise ConfigError("k_grid.step must be a positive integer", field="k_grid.step")
        if hi < lo:
            raise ConfigError("k_grid.max must be >= k_grid.min", field="k_grid.max")
        return tuple(range(lo, hi + 1, step))
    raise ConfigError("either k_values or k_grid is required", field="k_values")


@dataclass(frozen=True)
class CellAggregate:
    """Streamed summary of one (estimator, k) cell across replications.

    ``defined_count`` plus the number of undefined replications equals the
    total replication count; mean/bias/mse are None when no replication
    produced a defined value.
    """

    mean: float | None
    bias: float | None
    mse: float | None
    defined_count: int


@dataclass(frozen=True)
class SimulationResult:
    """Aggregated output of :func:`run_simulation`.

    ``cells`` maps column name to a tuple of :class:`CellAggregate` aligned
    with ``config.k_values``; ``replicate_values`` is populated only in
    debug mode (``keep_replicates=True``) with per-replication estimates.
    """

    config: SimulationConfig
    cells: dict
    runtime_seconds: float
    replicate_values: dict | None = None

    @property
    def column_names(self):
        return tuple(self.cells)

    def cell(self, name, k):
        j = self.config.k_values.index(k)
        return self.cells[name][j]

    def to_table(self):
        rows = []
        for name, aggregates in self.cells.items():
            for k, agg in zip(self.config.k_values, aggregates):
                rows.append((name, k, agg.mean, agg.bias, agg.mse, agg.defined_count))
        return Table(
            ("estimator", "k", "mean", "bias", "mse", "defined_count"), tuple(rows)
        )

    def to_json_dict(self):
        return {
            "schema": RESULT_SCHEMA,
            "config": self.config.to_json_dict(),
            "runtime_seconds": self.runtime_seconds,
            "results": [
                {
                    "estimator": name,
                    "k": k,
                    "mean": agg.mean,
                    "bias": agg.bias,
                    "mse": agg.mse,
                    "defined_count": agg.defined_count,
                }
                for name, aggregates in self.cells.items()
                for k, agg in zip(self.config.k_values, aggregates)
            ],
        }


class _Welford:
    """Numerically stable streaming mean and second central moment."""

    __slots__ = ("count", "mean", "m2")

    def __init__(self):
        self.count = 0
        self.mean = 0.0
        self.m2 = 0.0

    def add(self, x):
        self.count += 1
        delta = x - self.mean
        self.mean += delta / self.count
        self.m2 += delta * (x - self.mean)

    def aggregate(self, target):
        if self.count == 0:
            return CellAggregate(mean=None, bias=None, mse=None, defined_count=0)
        bias = self.mean - target
        mse = self.m2 / self.count + bias * bias
        return CellAggregate(
            mean=self.mean, bias=bias, mse=mse, defined_count=self.count
        )


def _replicate_paths(config, r_start, r_stop):
    """Estimate paths for replications r_start..r_stop-1 (1-based streams)."""
    kernels = tuple(builtin_kernel(name) for name in config.kernels)
    out = []
    for r in range(r_start, r_stop):
        stream = RngStream(config.master_seed, r)
        sample = sort_with_concomitants(
            sample_censored(config.model, config.n, stream)
        )
        path = estimate_path(
            sample, config.k_values, estimators=config.estimators, kernels=kernels
        )
        out.append(path.estimates)
    return out


def _collect_paths(config):
    total = config.replications
    try:
        if config.workers <= 1 or total == 1:
            return _replicate_paths(config, 1, total + 1)
        workers = min(config.workers, total)
        chunks = []
        per = math.ceil(total / (workers * 4))
        start = 1
        while start <= total:
            stop = min(start + per, total + 1)
            chunks.append((start, stop))
            start = stop
        with ProcessPoolExecutor(max_workers=workers) as pool:
            pieces = list(
                pool.map(_replicate_paths, [config] * len(chunks), *zip(*chunks))
            )
    except SimulationError:
        raise
    except Exception as exc:
        raise SimulationError(f"simulation replication failed: {exc}") from exc
    paths = []
    for piece in pieces:
        paths.extend(piece)
    return paths


def run_simulation(config, keep_replicates=False):
    """Run the full experiment described by a configuration.

    Parameters
    ----------
    config : SimulationConfig
    keep_replicates : bool
        Debug mode: retain every per-replication estimate so streamed
        aggregates can be cross-checked.

    Returns
    -------
    SimulationResult
        Per-cell mean, bias and MSE against the model's true tail index,
        aggregated over the replications where the estimator was defined.
        Results are bit-identical for a fixed master seed regardless of
        worker count.
    """
    started = time.perf_counter()
    paths = _collect_paths(config)
    target = config.model.gamma1
    names = list(paths[0])
    stats = {name: [_Welford() for _ in config.k_values] for name in names}
    for estimates in paths:  # replication order: merge is scheduling-free
        for name in names:
            column = estimates[name]
            for j, value in enumerate(column):
                if value is not None:
                    stats[name][j].add(value)
    cells = {
        name: tuple(w.aggregate(target) for w in stats[name]) for name in names
    }
    replicate_values = None
    if keep_replicates:
        replicate_values = {
            name: tuple(
                tuple(estimates[name][j] for estimates in paths)
                for j in range(len(config.k_values))
            )
            for name in names
        }
    runtime = time.perf_counter() - started
    return SimulationResult(
        config=config,
        cells=cells,
        runtime_seconds=runtime,
        replicate_values=replicate_values,
    )


def curve_smoothness(values):
    """Total variation of an estimate-vs-k curve.

    Sums |v_{j+1} - v_j| over consecutive defined points, skipping
    undefined cells; a curve with fewer than two defined points has no
    meaningful variation and raises TooFewPoints.
    """
    defined = [v for v in values if v is not None]
    if len(defined) < 2:
        raise TooFewPoints("need at least two defined points")
    return float(np.sum(np.abs(np.diff(defined))))


@dataclass(frozen=True)
class NormalityReport:
    """Empirical vs theoretical law of the scaled estimation error.

    Summarizes sqrt(k) * (estimate - gamma1) across replications next to
    the limiting variance computed by quadrature for the model's uncensored
    proportion p.
    """

    kernel_name: str
    n: int
    k: int
    replications: int
    defined_count: int
    gamma1: float
    p: float
    empirical_mean: float
    empirical_variance: float
    theoretical_variance: float

    @property
    def variance_ratio(self):
        return self.empirical_variance / self.theoretical_variance


def normality_check(model, n, k, replications, kernel, master_seed=0, workers=1):
    """Monte Carlo check of the limiting normal law of the kernel estimator.

    Draws ``replications`` samples of size n from ``model``, evaluates the
    kernel estimator at the single ``k``, and reports the empirical mean
    and variance of sqrt(k) * (estimate - gamma1) next to the limiting
    variance for the model's p.  Choose k small relative to n so the
    limiting mean is negligible.
    """
    kern = builtin_kernel(kernel) if isinstance(kernel, str) else kernel
    config = SimulationConfig(
        model=model,
        n=n,
        replications=replications,
        k_values=(int(k),),
        estimators=(),
        kernels=(kern.name,),
        master_seed=master_seed,
        workers=workers,
    )
    result = run_simulation(config)
    agg = result.cells[KERNEL_COLUMN_PREFIX + kern.name][0]
    if agg.defined_count < 2:
        raise SimulationError("fewer than two defined replications")
    population_var = agg.mse - agg.bias**2
    sample_var = population_var * agg.defined_count / (agg.defined_count - 1)
    spec = MomentSpec(gamma1=model.gamma1, p=model.p)
    return NormalityReport(
        kernel_name=kern.name,
        n=n,
        k=int(k),
        replications=replications,
        defined_count=agg.defined_count,
        gamma1=model.gamma1,
        p=model.p,
        empirical_mean=math.sqrt(k) * agg.bias,
        empirical_variance=k * sample_var,
        theoretical_variance=asymptotic_variance(kern, spec),
    )


def desk_scale_config(model, n=1000, replications=200, k_values=None, **kwargs):
    """Convenience constructor mirroring the default desk-scale experiment."""
    if k_values is None:
        k_values = tuple(range(20, min(501, n), 10))
    return SimulationConfig(
        model=model, n=n, replications=replications, k_values=tuple(k_values), **kwargs
    )
