"""Certified fermionic-Gaussian approximations for classically interacting
fermionic Hamiltonians: instance model, exact small-system oracle, Gaussian
state machinery, classical and quadratic solvers, an SDP-based blending
pipeline with approximation-ratio certificates, and a CLI."""

__version__ = "0.1.0"

from .model import (
    CifhInstance,
    Convention,
    InstanceError,
    GENERATOR_KINDS,
    complete_dense,
    fmc_instance,
    generate,
    heisenberg_line4,
    hubbard_chain,
    hubbard_triangle,
    instance_digest,
    parse_instance,
    random_instance,
    serialize_instance,
)
from .linalg import (
    AntisymBlockForm,
    block_diagonalize_antisym,
    eig_sym,
    project_psd,
)
from .gaussian import (
    CovarianceMatrix,
    PurityCertificate,
    blend,
    covariance_from_bits,
    energy_class,
    energy_quad,
    energy_total,
    local_refine,
    mediator,
    purify,
    purity,
    slater_check,
    wick_quartic,
)
from .quad import QuadSolution, hopping_matrix, solve_quad
from .oracle import (
    Line4UpperBound,
    SectorSpectrum,
    covariance_of_state,
    exact_spectrum,
    gaussian_density_matrix,
    jw_hamiltonian,
    line4_upper_bound,
)
from .classical import (
    Bipartition,
    ClassicalSolution,
    bipartite_exact,
    brute_force_classical,
    classical_energy,
    detect_bipartition,
    disjoint_edge_exact,
    gw_classical_psd,
    gw_signed_maxcut,
)
from .sdp import SdpFailure, SdpProblem, SdpSolution, hermitian_embed, solve_sdp
from .pipeline import (
    CertificationError,
    CertifiedSolution,
    PipelineError,
    SweepResult,
    build_covariance_sdp,
    classical_step,
    solve,
    solve_fixed_particles,
    solve_fmc,
    solve_psd,
    solve_traceless,
    sweep_p_class,
)
from .reports import CSV_HEADER, oracle_report, render_report, solve_report, sweep_csv
