"""Sparse coding with iterative hard, soft and Cauchy thresholding."""

from .dictionary import Dictionary, build_overcomplete_dct
from .metrics import MetricsRecord, mse, percent_nonzero, psnr
from .patches import Image, PatchSet, extract_patches, reconstruct_from_patches
from .prox import (
    CauchyPenalty,
    CubicRealRoots,
    RootPolicy,
    cauchy_shrink,
    cauchy_shrink_array,
    cauchy_shrink_gamma_zero,
    hard_threshold,
    prox_objective,
    soft_threshold,
    solve_prox_cubic,
)
from .solver import (
    Cauchy,
    CodingResult,
    DivergenceError,
    Hard,
    SolverConfig,
    Soft,
    cost,
    gradient_step,
    shrink_vector,
    sparse_code,
)

__version__ = "0.1.0"
