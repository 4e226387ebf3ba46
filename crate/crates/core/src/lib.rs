//! Kinetic hydrostatic-reconstruction solver for the 1D Saint-Venant system, with an
//! auditor for its fully discrete entropy inequalities.
//!
//! ```
//! use svkin::{cfl_timestep, step, Boundary, ConservedState, Grid1D, SchemeParams};
//!
//! let params = SchemeParams::new(9.81, 0.9).unwrap();
//! let grid = Grid1D::uniform(0.0, 1.0, 8, Boundary::Reflective, |x| 0.2 * x).unwrap();
//! let states: Vec<_> = grid
//!     .topography()
//!     .iter()
//!     .map(|z| ConservedState::new(1.0 - z, 0.0))
//!     .collect();
//! let dt = cfl_timestep(&states, &grid, &params).unwrap();
//! let (next, _report) = step(&states, &grid, &params, dt).unwrap();
//! assert!(next.iter().zip(&states).all(|(a, b)| (a.h - b.h).abs() < 1e-13));
//! ```

pub mod entropy;
pub mod error;
pub mod flux;
pub mod hr;
pub mod kinetic;
pub mod maxwellian;
pub mod quadrature;
pub mod state;

pub use entropy::{
    constants_chain, counterexample_audit, kinetic_inequality_residual, lipschitz_audit,
    local_dissipation, macro_audit, no_topo_audit, residual_decomposition, semi_discrete_audit,
    ConstantsChain, CounterexampleAudit, EntropyAudit, LipschitzAudit, LocalDissipation,
    NoTopoAudit, ResidualDecomposition, Scales, SemiDiscreteAudit,
};
pub use error::{Error, Result};
pub use flux::{
    kinetic_flux, kinetic_flux_quadrature, kinetic_flux_states, numerical_entropy_flux, FluxPair,
};
pub use hr::{
    hr_interface_fluxes, reconstruct, step, total_mass, InterfaceReconstruction, StepReport,
};
pub use kinetic::{
    consistency_probe, delta_maxwellian, kinetic_update, positivity_margin, KineticUpdate,
};
pub use maxwellian::{
    entropy_pair, eta, eta_prime, kinetic_entropy, subdifferential_residual, Maxwellian,
};
pub use quadrature::{build_quadrature, GaussLegendre, QuadratureRule};
pub use state::{
    cfl_timestep, max_wave_speed, velocity, Boundary, ConservedState, Grid1D, SchemeParams,
};
