"""Continuous-time quantum walks of two indistinguishable bosons with mixed inputs."""
from .correlation import CorrelationMatrix, gamma_bessel, gamma_family, gamma_general
from .errors import ConfigError, MarginError, PhysicalityError, WalkError
from .lattice import Boundary, Lattice, LatticeSpec, build_lattice, single_particle_matrix
from .observables import (
    avg_distance,
    distance_series,
    entropy_series,
    reduced_density_left,
)
from .propagator import Propagator, propagate_bessel, propagate_spectral, spectral_factory
from .states import (
    BeamParams,
    CoherenceFamilyParams,
    TwoBosonDensityMatrix,
    TwoBosonPureState,
    coherence_eta,
    density_from_beams,
    density_from_family,
    density_from_pure,
    pure_state,
    validate,
)

__version__ = "0.1.0"
