"""Inverse scattering toolkit for the 2x2 matrix Hirota system with
nonzero boundary conditions: reflectionless soliton/breather construction,
numerical direct scattering, and independent PDE-level verification."""

from .grids import ARTIFACT_VERSION as __version__

from .errors import HirotaError
from .grids import FieldGrid, GridSpec, read_csv, read_json, write_csv, write_json
from .matrices import CMat2, CMat4, dagger, det2, det4, inv2, inv4, pauli_set
from .presets import Preset, preset, preset_names
from .scattering import (
    JostState,
    ScatteringSample,
    audit_symmetries,
    det_a,
    find_discrete_spectrum,
    integrate_jost,
    jost_state,
    scattering_matrix,
)
from .solitons import (
    DiscreteEigenpair,
    RankFlag,
    SolitonSpec,
    assemble_system,
    eval_field,
    expand_quartets,
    one_soliton_closed_form,
    quartet_partner,
    reconstruct_Q,
    sampled_field,
)
from .spectral import Background, Region, SpectralPoint, classify_region, contour_samples, theta, uniformize
from .traceform import TraceInput, theta_condition, theta_condition_variants, trace_det_a
from .verification import (
    DecayReport,
    ResidualReport,
    boundary_decay,
    pde_residual,
    periodicity_probe,
    symmetry_residual,
)
from .lax import (
    PotentialSample,
    assemble_U,
    assemble_V,
    asymptotic_eigenvectors,
    embed,
    zero_curvature_residual,
)
