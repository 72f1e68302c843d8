"""Unsupervised recovery of a hidden band normal from contrastive moments."""

from .density1d import (
    BandSpec,
    DegenerateBandError,
    DensityModel,
    Family,
    InadmissibleBandError,
    band_stats,
    cdf,
    epsilon_check,
    pdf,
    quantile,
    sample_truncated,
    truncated_moment,
)
from .estimator import (
    AlphaConfig,
    CandidateSet,
    Whitener,
    candidates,
    isotropic_candidates,
    reweighted_mean,
    reweighted_uncentered_cov,
    whiten,
)
from .linalg import EigenPair, inv_sqrt, mean_cov, sym_eigen, top_eigenpair
from .margin import (
    MarginReport,
    NoCandidateError,
    RecoveryResult,
    max_margin,
    recover,
    recover_isotropic,
    select,
    sin_theta,
)
from .sampler import AffineMode, Dataset, MarginInstance, generate, make_instance

__version__ = "0.1.0"
