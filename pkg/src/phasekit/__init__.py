"""Generalized oscillator algebra, phase states and mutually unbiased bases."""

from .algebra import (
    KappaParam,
    Representation,
    RepresentationError,
    build_representation,
    commutator_residual,
    degeneracy_report,
    dimension_of,
    nilpotency_check,
    structure_function,
)
from .config import Tolerances
from .mub import (
    build_mub_set,
    gauss_sum,
    mub_state_finite,
    mub_state_truncated,
    overlap_via_gauss,
    pseudo_commutation_check,
)
from .phase import (
    PhaseState,
    build_vs_us,
    build_weights,
    evolve,
    overlap,
    phase_operator,
    phase_operator_infinite_cutoff,
    phase_states,
    theta_phase_state,
    vs_phase_states,
)
from .potentials import parse_potential, physical_phase_states, to_spectrum_params

__version__ = "0.1.0"
