"""Tail-index estimation for right-censored heavy-tailed data.

The package covers the full desk workflow: censored-sample containers and
CSV I/O, product-limit survival curves, kernel-smoothed and classical
tail-index estimators, heavy-tailed samplers, and a reproducible Monte
Carlo engine, all fronted by the ``censtail`` command-line tool.
"""

from . import errors
from .estimators import (
    ESTIMATOR_NAMES,
    EstimatePath,
    efg,
    estimate_path,
    hill,
    kernel_estimator,
    mns,
    p_hat,
    worms,
)
from .kernels import (
    BIWEIGHT,
    BUILTIN_KERNEL_NAMES,
    INDICATOR,
    TRIWEIGHT,
    Kernel,
    KernelAxiomReport,
    MomentSpec,
    asymptotic_bias,
    asymptotic_variance,
    builtin_kernel,
    check_kernel_axioms,
    custom_kernel,
)
from .models import (
    Burr,
    Frechet,
    ModelSpec,
    Pareto,
    RngStream,
    burr_quantile,
    frechet_quantile,
    gamma2_from_p,
    pareto_quantile,
    sample_censored,
    upper_uncensored_proportion,
)
from .samples import (
    CensoredSample,
    CsvFormat,
    SortedCensoredSample,
    Table,
    read_csv,
    read_table,
    render_csv,
    sort_with_concomitants,
    write_csv,
)
from .simulate import (
    CellAggregate,
    NormalityReport,
    SimulationConfig,
    SimulationResult,
    curve_smoothness,
    desk_scale_config,
    normality_check,
    run_simulation,
)
from .survival import (
    StepCurve,
    empirical_H,
    empirical_H1,
    kaplan_meier_curve,
    kaplan_meier_survival,
    nelson_aalen_curve,
    nelson_aalen_survival,
)

__version__ = "0.1.0"

__all__ = [
    "errors",
    "ESTIMATOR_NAMES",
    "EstimatePath",
    "efg",
    "estimate_path",
    "hill",
    "kernel_estimator",
    "mns",
    "p_hat",
    "worms",
    "BIWEIGHT",
    "BUILTIN_KERNEL_NAMES",
    "INDICATOR",
    "TRIWEIGHT",
    "Kernel",
    "KernelAxiomReport",
    "MomentSpec",
    "asymptotic_bias",
    "asymptotic_variance",
    "builtin_kernel",
    "check_kernel_axioms",
    "custom_kernel",
    "Burr",
    "Frechet",
    "ModelSpec",
    "Pareto",
    "RngStream",
    "burr_quantile",
    "frechet_quantile",
    "gamma2_from_p",
    "pareto_quantile",
    "sample_censored",
    "upper_uncensored_proportion",
    "CensoredSample",
    "CsvFormat",
    "SortedCensoredSample",
    "Table",
    "read_csv",
    "read_table",
    "render_csv",
    "sort_with_concomitants",
    "write_csv",
    "CellAggregate",
    "NormalityReport",
    "SimulationConfig",
    "SimulationResult",
    "curve_smoothness",
    "desk_scale_config",
    "normality_check",
    "run_simulation",
    "StepCurve",
    "empirical_H",
    "empirical_H1",
    "kaplan_meier_curve",
    "kaplan_meier_survival",
    "nelson_aalen_curve",
    "nelson_aalen_survival",
    "__version__",
]
