"""Scattering off non-Hermitian delta and barrier potentials with Lévy (fractional) dispersion."""
from .core import (
    DomainError,
    LevyContext,
    diffusion_coefficient,
    epsilon_ratio,
    inside_wavenumber,
    mu_pair,
    principal_power,
    wavenumber,
)
from .delta import (
    DeltaSSResult,
    ShiftClass,
    classify_shift,
    delta_ss_energy,
    delta_ss_result,
    ss_phase_condition,
    ss_ratio,
)
from .kernels import BACKEND
from .scan import (
    ScanField,
    ScanGrid,
    SingularityReport,
    SubPeakTrack,
    alpha_profile,
    find_cpa,
    find_ss,
    scan_field,
    scan_fields,
    track_subpeaks,
)
from .transfer import (
    ComplexBarrier,
    ComplexDelta,
    ScatteringSet,
    SingularOverlapWarning,
    SpectralSingularityError,
    TransferMatrix,
    barrier_matrix,
    compose,
    cpa_residual,
    delta_matrix,
    log_amplitudes,
    scattering_set,
    transfer_matrix,
    translated,
)

__version__ = "0.1.0"
