"""Pseudospectral simulator for coupled gauge/scalar wave dynamics on the
2D torus, in temporal gauge and gauge-decomposed half-wave form, plus a
numerical lab for the multilinear estimates behind its local theory."""

from .spectral import (
    GridSpec,
    SpectralField2D,
    SymbolSpec,
    apply_symbol,
    null_form_q12,
    pointwise_product,
)
from .gauge import (
    GaugeState,
    RegularityTriple,
    check_admissibility,
    compatibility_curlfree,
    gauss_residual,
    halfwave_reconstruct,
    halfwave_split,
    helmholtz_decompose,
    verify_null_identities,
)
from .dynamics import (
    EvolveConfig,
    PicardConfig,
    assemble_rhs,
    conserved_quantities,
    evolve,
    picard_iterate,
    step,
)
from .norms import SpaceTimeField, XsbSpec, mixed_norm, sobolev_norm, xsb_norm
from .estimates import (
    ExponentTuple,
    FrequencyTriple,
    RatioReport,
    angle_ratio,
    bilinear_conditions,
    bilinear_ratio_fuzz,
    free_wave,
    sobolev_product_ratio,
    strichartz_tataru_ratio,
)
from .data import rough_data_generate, smooth_data_generate, data_to_state
from .snapshots import snapshot_read, snapshot_write
from .diagnostics import DiagnosticsRecord

__version__ = "0.1.0"

__all__ = [
    "GridSpec",
    "SpectralField2D",
    "SymbolSpec",
    "apply_symbol",
    "pointwise_product",
    "null_form_q12",
    "GaugeState",
    "RegularityTriple",
    "check_admissibility",
    "compatibility_curlfree",
    "gauss_residual",
    "halfwave_split",
    "halfwave_reconstruct",
    "helmholtz_decompose",
    "verify_null_identities",
    "EvolveConfig",
    "PicardConfig",
    "assemble_rhs",
    "step",
    "evolve",
    "picard_iterate",
    "conserved_quantities",
    "SpaceTimeField",
    "XsbSpec",
    "sobolev_norm",
    "mixed_norm",
    "xsb_norm",
    "ExponentTuple",
    "FrequencyTriple",
    "RatioReport",
    "angle_ratio",
    "free_wave",
    "strichartz_tataru_ratio",
    "bilinear_conditions",
    "bilinear_ratio_fuzz",
    "sobolev_product_ratio",
    "rough_data_generate",
    "smooth_data_generate",
    "data_to_state",
    "snapshot_write",
    "snapshot_read",
    "DiagnosticsRecord",
]
