"""Compact quantum-density solitons: construction, residual checks, barrier
scattering, tunneling times and flux quantization, with a textbook
linear-Schrodinger oracle for comparison."""

__version__ = "0.1.0"

from .chronometry import (
    TunnelingReport,
    UncertaintyRecord,
    arrival_time,
    min_transmitted_distance,
    traversal_time,
    tunneling_time,
    uncertainty_product,
)
from .errors import (
    ArccosDomainError,
    BoundViolationError,
    ConfigError,
    DegenerateEnergyError,
    InsufficientGridError,
    MatchingSingularityError,
    QDSolitonError,
    RegimeError,
    ZeroDensityError,
)
from .junction import (
    FluxRecord,
    JunctionState,
    flux_from_quantum_number,
    lossless_condition,
    quantize_loop,
    transmitted_number_density,
)
from .oracle import (
    OracleResult,
    analytic_transmission,
    compare_report,
    transfer_matrix_amplitude,
    wigner_phase_time,
)
from .scattering import (
    ScatteringSetup,
    ScatteringSolution,
    is_resonant,
    make_setup,
    resonance_energies,
    setup_for,
    solve_regions,
)
from .soliton import (
    DensityField,
    Soliton,
    build_soliton,
    density_at,
    quantum_potential_numeric,
    residual_continuity,
    residual_momentum,
)
from .units import (
    NATURAL,
    Barrier,
    ParticleState,
    PhysicalContext,
    Regime,
    de_broglie_wavelength,
    wavenumber,
)
