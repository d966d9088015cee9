"""Zero-temperature p-spin landscapes of binary associative memories."""

__version__ = "0.1.0"

from .dynamics import DescentPolicy, DescentResult, descend, perturb
from .energy import (
    OverlapState,
    SplitOverlaps,
    apply_flip,
    delta_flip,
    energy_full,
    flip_identity_p2,
    gap_representation,
    init_overlaps,
    split_overlaps,
)
from .landscape import (
    BarrierProfile,
    BudgetError,
    LocalMinSet,
    certify_local_min,
    enumerate_local_minima,
    ground_state,
    revolving_door_swaps,
    sphere_scan,
)
from .model import (
    ConstantsTable,
    ExponentSet,
    LoadParams,
    constants_table,
    d_constant,
    e_constant,
    entropy,
    exponents,
    h_constant,
    kappa1_constant,
    load_params,
    phi,
    phi_bar,
    threshold_t,
)
from .patterns import (
    FlipSet,
    PatternFormatError,
    PatternMatrix,
    PatternTruncatedError,
    SpinState,
    flip,
    generate,
    hamming,
    load_patterns,
    save_patterns,
    sym_hamming,
)
from .priors import CumulantReport, PriorSpec, growth_ratio, psi_norm, sample, u_eval
