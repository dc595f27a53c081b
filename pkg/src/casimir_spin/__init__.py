"""Vacuum (Casimir) friction torque on a spinning dielectric ellipsoid."""

from .dipole_radiation import (ComplexDipoleAmplitude, FieldSample, TorqueResult, hertz_field,
                               radiated_torque_z, stress_tensor_torque_oracle)
from .errors import (CasimirSpinError, ConfigError, ConsistencyError, PhysicsDomainError,
                     QuadratureError, ResonanceError, ShapeError, SingularityError)
from .polarizability import (DepolarizationFactors, Ellipsoid, PolarizabilityTensor,
                             alpha_beta_split, depolarization_factors, polarizability_tensor,
                             spheroid_depolarization)
from .rotating_scatter import (IncidentMode, SpectralDecomposition, SpinState,
                               decompose_rotating_polarization, mode_torque, small_omega_torque)
from .vacuum_spectrum import (CasimirTorqueResult, VacuumIntegrationConfig, casimir_torque,
                              mode_density, per_mode_field_square, torque_spectrum)

__version__ = "0.1.0"
