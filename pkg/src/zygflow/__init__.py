"""Numerical verification toolkit for 1-d flows with rough-slope fields.

Flow maps and their logarithmic derivatives, interval-sweep oscillation and
weight estimators, transport along characteristics, and bound reports that
compare measured quantities against exponential envelopes.
"""

from .grids import (
    IntervalFamily,
    SampledFunction,
    UniformGrid,
    build_family,
    interval_mean,
    make_grid,
)
from .report import BoundReport, ConstantsLedger
from .weights import (
    WeightEstimate,
    ainfty_constant,
    ap_constant,
    bmo_norm,
    exp_a2_check,
    exp_small_bmo_ainfty,
    gaussian_divergence,
    jn_tail,
    log_weight_bmo_check,
    orlicz_exp_norm,
    reverse_holder_check,
    star_norm,
)
from .fields import (
    Affine,
    CallableProfile,
    Field,
    FieldNorms,
    MollifiedField,
    PiecewiseConstantProfile,
    PowerLog,
    SampledShape,
    SeparableField,
    Sine,
    TruncatedField,
    XLogAbs,
    growth_bound_check,
    increment_ratio_check,
    mollify,
    parse_field,
    truncate,
    zygmund_seminorm,
)
from .flow import (
    FlowResult,
    SolverConfig,
    SolverError,
    backward_flow,
    check_inverse,
    check_semigroup,
    density_formula_check,
    derivative_bound_check,
    forward_flow,
)
from .transport import (
    TransportResult,
    characteristic_residual,
    solution_bmo_growth,
    transport_solve,
)
from .bounds import gronwall_rhs, iterated_bound, sharpness_report, time_partition

__version__ = "0.1.0"
