"""Free-stream preserving WENO solver for 2D ideal MHD on curvilinear meshes.

The conservation law is discretised with the alternative-formulation finite
difference WENO scheme; the constrained-transport magnetic potential evolves
through a linearity-preserving WENO Hamilton-Jacobi solver built on per-node
angular sectors.  Together they keep uniform flow uniform, to roundoff, on
wavy, randomized, moving and spherical meshes.
"""

__version__ = "0.1.0"

from .grid import (GridSpec, GridField, generate, free_stream_metrics,
                   metric_identities, temporal_jacobian_rate,
                   stage_mesh_velocity, write_grid_csv)
from .physics import (GAMMA, CharacteristicBasis, InvalidStateError,
                      conserved_to_primitive, eigensystem, max_wave_speed,
                      physical_flux, primitive_to_conserved, transformed_flux)
from .weno import (WenoOperator, apply_operator, weno5_hj_derivative,
                   weno5_interpolate, weno5_interpolate_system)
from .fluxes import interface_flux, mhd_rhs, sigma
from .hamiltonian import (LinearHamiltonian, SineSumHamiltonian,
                          SectorGeometry, hj_rhs, hj_rhs_npl, lambda_bound,
                          monotone_hamiltonian, sector_geometry,
                          sector_gradients)
from .transport import (CoupledState, CoupledStepper, SolverFailure,
                        discrete_curl, divergence_diagnostic, energy_fix)
from .rk import rk3_advance
from .driver import RunConfig, run_case, convergence_table, verify
