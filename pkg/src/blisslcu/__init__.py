"""Symmetry-shift preprocessing and LCU 1-norm analysis for molecular
electronic Hamiltonians."""

__version__ = "0.1.0"

from .hamiltonian import (
    MolecularHamiltonian,
    OrbitalRotation,
    rotate_orbitals,
    rotation_matrix,
)
from .fcidump import FcidumpError, load_fcidump, save_fcidump
from .pauli import (
    PauliSum,
    PauliWord,
    anticommutes,
    jordan_wigner,
    majorana_term_list,
    number_operator,
    to_sparse_matrix,
)
from .norms import (
    csa_one_norm,
    df_one_norm,
    one_body_corrected_norm,
    pauli_one_norm,
)
from .decompositions import (
    ACDecomposition,
    AnticommutingGroup,
    CSADecomposition,
    CSAFragment,
    DFDecomposition,
    DFFragment,
    PauliDecomposition,
    ac_decomposition,
    ac_grouping,
    ac_grouping_majorana,
    count_unitaries,
    csa_decomposition,
    df_decomposition,
    pauli_decomposition,
    csa_greedy,
    df_decompose,
    orbital_optimize,
)
from .shift import (
    ShiftParameters,
    ShiftResult,
    absorb_shift,
    evaluate_shift_objective,
    optimize_bliss,
    optimize_symmetry_shift,
)
from .spectra import (
    SpectralReport,
    full_spectral_range,
    sector_eigenvalues,
    sector_isospectrality,
    sector_spectral_range,
)
from .fitting import FitResult, proportional_fit, scaling_fit
from .estimators import (
    AnticommutingLCU,
    BlissShift,
    DoubleFactorizedLCU,
    GreedyCSALCU,
    OrbitalRotationOptimizer,
    PauliLCU,
)
from .report import (
    LCUReport,
    RunConfig,
    export_shifted,
    load_shift_sidecar,
    run_analysis,
)

__all__ = [
    "__version__",
    "MolecularHamiltonian",
    "OrbitalRotation",
    "rotate_orbitals",
    "rotation_matrix",
    "FcidumpError",
    "load_fcidump",
    "save_fcidump",
    "PauliSum",
    "PauliWord",
    "anticommutes",
    "jordan_wigner",
    "majorana_term_list",
    "number_operator",
    "to_sparse_matrix",
    "pauli_one_norm",
    "one_body_corrected_norm",
    "csa_one_norm",
    "df_one_norm",
    "AnticommutingGroup",
    "ACDecomposition",
    "CSADecomposition",
    "CSAFragment",
    "DFDecomposition",
    "DFFragment",
    "PauliDecomposition",
    "ac_decomposition",
    "ac_grouping",
    "ac_grouping_majorana",
    "count_unitaries",
    "csa_decomposition",
    "df_decomposition",
    "pauli_decomposition",
    "csa_greedy",
    "df_decompose",
    "orbital_optimize",
    "ShiftParameters",
    "ShiftResult",
    "absorb_shift",
    "evaluate_shift_objective",
    "optimize_bliss",
    "optimize_symmetry_shift",
    "SpectralReport",
    "full_spectral_range",
    "sector_eigenvalues",
    "sector_isospectrality",
    "sector_spectral_range",
    "FitResult",
    "proportional_fit",
    "scaling_fit",
    "AnticommutingLCU",
    "BlissShift",
    "DoubleFactorizedLCU",
    "GreedyCSALCU",
    "OrbitalRotationOptimizer",
    "PauliLCU",
    "LCUReport",
    "RunConfig",
    "export_shifted",
    "load_shift_sidecar",
    "run_analysis",
]
