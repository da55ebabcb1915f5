"""Inverse-scattering toolkit for the 1D Gross-Pitaevskii equation.

Forward Zakharov-Shabat scattering for perturbed black-soliton profiles,
explicit spectral-data evolution, Marchenko inversion with field
reconstruction, a direct PDE cross-check, and an orbital-stability harness.
"""

__version__ = "0.1.0"

from .errors import (BoundaryContaminationError, CFLViolationError,
                     DerivativeMismatchError, GapGrowthError, GpistError,
                     IllConditionedError, ImaginaryLeakError,
                     InconsistentNormingConstantError, MismatchedGridsError,
                     NoZeroFoundError, NormalizationFailedError, PoleHitError,
                     ResidualTooLargeError, StageError)
from .evolution import EvolvedData, evolve
from .fields import (FieldProfile, black_soliton, dark_soliton,
                     make_black_soliton, read_profile_csv, write_profile_csv)
from .harness import (DiagnosticRecord, ExperimentConfig, StabilityReport,
                      parse_config, run_diagnostics, run_stability)
from .jost import (DiscreteData, JostPair, ScatteringData,
                   argument_principle_count, discrete_data,
                   forward_scattering, jost_solve, transition_coefficients,
                   wronskian, zero_limit_diagnostic)
from .marchenko import (KernelField, MarchenkoKernels, ReconstructionResult,
                        build_kernels, consistency_residuals,
                        finite_rank_solution, reconstruct_field,
                        reconstruct_profile, solve_marchenko)
from .pde import PDEState, energy, energy_distance, integrate, lax_residual
from .perturbations import make_perturbation
from .spectral import (Grid1D, Sheet, SheetPoint, SpectralGrid, free_states,
                       gap_point, lift, make_spectral_grid, unperturbed_a,
                       unperturbed_jost, unperturbed_kernel)
