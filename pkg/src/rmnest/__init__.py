"""Reed-Muller nesting toolkit.

Construction and projection of binary Reed-Muller codes, exact and Monte
Carlo extrinsic decoding metrics over BEC/BSC/BMS channels, biased boolean
Fourier analysis of decoding functions, and numerical verification of the
finite-size bound recursions that tie them together.
"""

__version__ = "0.1.0"

from .channels import ChannelModel, bec, bsc, discrete_bms, erasure_cascade, make_channel, sample_noise
from .codes import (
    BinaryCode,
    CoordPermutation,
    RmParams,
    codes_equal,
    is_automorphism,
    min_distance,
    project,
    rm_generator,
    rm_rate_exact,
    theta_map,
)
from .decoders import (
    ErasurePattern,
    ExtrinsicMetrics,
    SyndromeTable,
    bec_recoverable,
    bms_conditional_mean,
    bsc_extrinsic_bitmap,
    build_syndrome_table,
    extrinsic_metrics,
    majority3,
    multi_look_decode,
)
from .errors import ConstructionError, FeasibilityError, ParameterError, StructureError, SymmetryError
from .fourier import (
    BooleanFn,
    GroupSampler,
    Spectrum,
    biased_transform,
    level_k_check,
    level_profile,
    orbit_restriction_prob,
    restrict_spectrum,
    restriction_identity_check,
)
from .subspaces import (
    InvertibleMap,
    LookFamily,
    SpreadFamily,
    gaussian_binomial,
    multi_look_family,
    sample_gl,
    set_dim,
    spread_family,
)
from .bounds import (
    BoundTrace,
    TransferParams,
    list_ball_bound,
    rate_phi_bound,
    recursion_step,
    theorem_trace,
    tz_sasoglu_transfer,
)
from .harness import ExitCurve, ExperimentConfig, exit_curve, mc_extrinsic_metrics
