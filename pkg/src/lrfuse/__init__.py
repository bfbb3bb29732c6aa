"""Mixed-noise grayscale image denoising by random-mask low-rank completion.

The method: draw several random sampling masks over a noisy image, complete
each masked copy with a low-rank factorization fitted by alternating
minimization, and fuse the reconstructions in the Haar wavelet domain with
hard thresholding (or by plain averaging).  See README.md for usage and
the ``lrfuse`` command line tool for the scriptable interface.
"""

from .image import (
    MAX_INTENSITY,
    PgmError,
    crop,
    extend_to_even,
    load_pgm,
    quantize,
    read_pgm,
    save_pgm,
    write_pgm,
)
from .kernels import BACKEND
from .lowrank import (
    EmptyMaskLineError,
    FactorPair,
    FactorSettings,
    lrmf_am,
    masked_objective,
    top_singular_values,
)
from .metrics import QualityReport, mse, psnr, quality_report, ssim
from .noise import NoiseParams, add_awgn, add_sapn, corrupt_mixed
from .pipeline import (
    MaskRetryError,
    PipelineConfig,
    RunReport,
    denoise,
    denoise_both,
    tau_select,
)
from .rng import RandomStream
from .sampling import (
    MaskedImage,
    apply_mask,
    empty_mask_line,
    gen_nonoverlap_pair,
    gen_overlap_pair,
)
from .wavelet import SubbandSet, dwt_haar, fuse, hard_threshold, idwt_haar

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "EmptyMaskLineError",
    "FactorPair",
    "FactorSettings",
    "MAX_INTENSITY",
    "MaskRetryError",
    "MaskedImage",
    "NoiseParams",
    "PgmError",
    "PipelineConfig",
    "QualityReport",
    "RandomStream",
    "RunReport",
    "SubbandSet",
    "add_awgn",
    "add_sapn",
    "apply_mask",
    "corrupt_mixed",
    "crop",
    "denoise",
    "denoise_both",
    "dwt_haar",
    "empty_mask_line",
    "extend_to_even",
    "fuse",
    "gen_nonoverlap_pair",
    "gen_overlap_pair",
    "hard_threshold",
    "idwt_haar",
    "load_pgm",
    "lrmf_am",
    "masked_objective",
    "mse",
    "psnr",
    "quality_report",
    "quantize",
    "read_pgm",
    "save_pgm",
    "ssim",
    "tau_select",
    "top_singular_values",
    "write_pgm",
    "__version__",
]
