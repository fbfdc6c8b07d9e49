"""Binary abelian codes of length 3^m between the Berman family and its dual,
with distance bounds, polar-style encoders, and channel simulation."""

from .codes import (
    CodeSpec,
    GeneratorMatrix,
    Kernel,
    abelian_generator,
    bid_generator,
    dimension,
    dual_weight_set,
    get_kernel,
    kernel_row_class,
    spectral_membership,
)
from .decode import (
    AMBIGUOUS,
    SearchBudget,
    bec_ml_decode,
    ml_lower_bound_event,
    ordered_search_decode,
    sc_decode,
)
from .distance import (
    DistanceInterval,
    brute_force_min_distance,
    closed_form_lower,
    random_low_weight_search,
    recursion_tree,
    recursive_bounds,
    scatter_data,
)
from .sim import (
    BEC,
    BIAWGN,
    DecoderConfig,
    TrialLedger,
    rows_to_csv,
    simulate_awgn,
    simulate_bec,
    sweep,
    wilson_interval,
)
from .transform import (
    EncoderConfig,
    FrozenSpec,
    encode,
    frozen_spec,
    make_config,
    polar_transform,
)

__all__ = [
    "AMBIGUOUS",
    "BEC",
    "BIAWGN",
    "CodeSpec",
    "DecoderConfig",
    "DistanceInterval",
    "EncoderConfig",
    "FrozenSpec",
    "GeneratorMatrix",
    "Kernel",
    "SearchBudget",
    "TrialLedger",
    "abelian_generator",
    "bec_ml_decode",
    "bid_generator",
    "brute_force_min_distance",
    "closed_form_lower",
    "dimension",
    "dual_weight_set",
    "encode",
    "frozen_spec",
    "get_kernel",
    "kernel_row_class",
    "make_config",
    "ml_lower_bound_event",
    "ordered_search_decode",
    "polar_transform",
    "random_low_weight_search",
    "recursion_tree",
    "recursive_bounds",
    "rows_to_csv",
    "sc_decode",
    "scatter_data",
    "simulate_awgn",
    "simulate_bec",
    "spectral_membership",
    "sweep",
    "wilson_interval",
]

__version__ = "0.1.0"
