//! Numerical certification of the discrete entropy inequalities of the scheme.

pub mod constants;
pub mod counterexample;
pub mod kinetic_inequality;
pub mod lipschitz;
pub mod macro_audit;
pub mod no_topography;
pub mod semi_discrete;

pub use constants::{constants_chain, ConstantsChain};
pub use counterexample::{counterexample_audit, counterexample_setup, CounterexampleAudit};
pub use kinetic_inequality::{
    kinetic_inequality_residual, residual_decomposition, ResidualDecomposition,
};
pub use lipschitz::{lipschitz_audit, LipschitzAudit};
pub use macro_audit::{
    local_dissipation, macro_audit, total_energy, EntropyAudit, LocalDissipation,
};
pub use no_topography::{no_topo_audit, NoTopoAudit};
pub use semi_discrete::{semi_discrete_audit, SemiDiscreteAudit};

use crate::state::ConservedState;

/// Reference scales for nondimensional audit tolerances, from `h_ref = max h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scales {
    pub h_ref: f64,
    pub g: f64,
}

impl Scales {
    pub fn new(h_ref: f64, g: f64) -> Self {
        Self { h_ref, g }
    }

    /// Uses the largest height among `states`, at least `floor`.
    pub fn of_states<'a>(
        states: impl IntoIterator<Item = &'a ConservedState>,
        g: f64,
        floor: f64,
    ) -> Self {
        let h_ref = states.into_iter().map(|s| s.h).fold(floor, f64::max);
        Self { h_ref, g }
    }

    /// Scale of node values of `H` and `ξ H`: `√g h^{3/2}`.
    pub fn kinetic(&self) -> f64 {
        self.g.sqrt() * self.h_ref.powf(1.5)
    }

    /// Scale of `η`: `g h²`.
    pub fn energy(&self) -> f64 {
        self.g * self.h_ref * self.h_ref
    }

    /// Scale of `∫ M (ΔM)² dξ`: `h²/g`.
    pub fn lipschitz(&self) -> f64 {
        self.h_ref * self.h_ref / self.g
    }
}
