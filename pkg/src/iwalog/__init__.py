"""Precision-tracked p-adic matrix engine for two-variable tower arithmetic.

Layers, bottom up: exact p-adic scalars with valuation bookkeeping
(padic), integer polynomial kernels (polyint), cyclotomic field elements
with fractional valuations (cyclotomic), the two-variable group-ring
polynomials and character points (iwasawa), logarithm factor matrices,
signed minors and Newton polygons (logmatrix), block closed forms and
vanishing patterns (blockform), elimination-rank oracles (smith),
character-class census and growth certificates (growth), plus the
scenario configuration, reporting and CLI front end.
"""

from .blockform import (
    BlockData,
    PatternReport,
    closed_form_h,
    conjugate_basis,
    delta_element,
    delta_valuation,
    kernel_invariance_check,
    surviving_index,
    verify_vanishing_pattern,
)
from .config import ConfigError, ScenarioConfig, gen_test_matrices, load_config
from .cyclotomic import CycloElement, phi, phi_value_at_root
from .growth import (
    GrowthScenario,
    ModulePresentation,
    PolyFactor,
    ScenarioError,
    TaggedFactor,
    class_rank,
    coinvariant_rank,
    enumerate_classes,
    fit_coinvariant_growth,
    growth_bound_series,
    h_large_scan,
    mordell_weil_bound,
    xi_count,
)
from .iwasawa import CharacterPoint, IwasawaPoly, omega_poly
from .logmatrix import (
    DieudonneInput,
    InputRejected,
    LambdaMatrix,
    SignedIndex,
    convergence_diagnostic,
    enumerate_signed_indices,
    h_block,
    h_matrix,
    h_matrix_sequence,
    m_approximant,
    minor,
    newton_polygon,
)
from .padic import PAdicScalar, Valuation, val_p
from .reporting import TOOL_VERSION as __version__
from .smith import coinvariant_rank_smith, valuation_pivot_rank

__all__ = [
    "BlockData",
    "CharacterPoint",
    "ConfigError",
    "CycloElement",
    "DieudonneInput",
    "GrowthScenario",
    "InputRejected",
    "IwasawaPoly",
    "LambdaMatrix",
    "ModulePresentation",
    "PAdicScalar",
    "PatternReport",
    "PolyFactor",
    "ScenarioConfig",
    "ScenarioError",
    "SignedIndex",
    "TaggedFactor",
    "Valuation",
    "__version__",
    "class_rank",
    "closed_form_h",
    "coinvariant_rank",
    "coinvariant_rank_smith",
    "conjugate_basis",
    "convergence_diagnostic",
    "delta_element",
    "delta_valuation",
    "enumerate_classes",
    "enumerate_signed_indices",
    "fit_coinvariant_growth",
    "gen_test_matrices",
    "growth_bound_series",
    "h_block",
    "h_large_scan",
    "h_matrix",
    "h_matrix_sequence",
    "kernel_invariance_check",
    "load_config",
    "m_approximant",
    "minor",
    "mordell_weil_bound",
    "newton_polygon",
    "omega_poly",
    "phi",
    "phi_value_at_root",
    "surviving_index",
    "val_p",
    "valuation_pivot_rank",
    "verify_vanishing_pattern",
    "xi_count",
]
