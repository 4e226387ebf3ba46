use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Multipliers of `ε₀ = c_{α,β} / (2(1+α)β)` tried for `ε`.
pub const EPSILON_GRID: [f64; 4] = [0.5, 0.25, 0.125, 0.0625];

/// Dimensionless constants of the fully discrete kinetic entropy inequality for a CFL fraction `β`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstantsChain {
    pub beta: f64,
    /// Midpoint of `0 < α < 2/(β(3−β)) − 1`.
    pub alpha: f64,
    pub epsilon: f64,
    pub epsilon2: f64,
    /// `min(1 − (1+α)β², 2 + (1+α)β² − 3(1+α)β)`.
    pub c_ab: f64,
    /// `c_{α,β} − 2ε(1+α)β`.
    pub nu0: f64,
    /// Dissipation constant left after the cross terms are absorbed.
    pub nu: f64,
    /// Coefficient of the cross terms `M_i |ΔM| |M_i − M_rec|`.
    pub lambda: f64,
    /// Error constant of the kinetic inequality.
    pub c_kinetic: f64,
    /// Error constant of the integrated (macroscopic) inequality.
    pub c_macro: f64,
}

fn c_alpha_beta(alpha: f64, beta: f64) -> f64 {
    let a1 = 1.0 + alpha;
    (1.0 - a1 * beta * beta).min(2.0 + a1 * beta * beta - 3.0 * a1 * beta)
}

/// Builds the chain `α → c_{α,β} → ε → ν⁰ → ε₂ → ν, C` for `0 < β < 1`.
pub fn constants_chain(beta: f64) -> Result<ConstantsChain> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::CflFractionOutOfRange(beta));
    }
    let alpha = 0.5 * (2.0 / (beta * (3.0 - beta)) - 1.0);
    let a1 = 1.0 + alpha;
    let c_ab = c_alpha_beta(alpha, beta);
    let eps0 = c_ab / (2.0 * a1 * beta);
    let (epsilon, nu0) = EPSILON_GRID
        .iter()
        .map(|k| {
            let eps = k * eps0;
            (eps, c_ab - 2.0 * eps * a1 * beta)
        })
        .filter(|&(_, nu0)| nu0 > 0.0)
        .fold((f64::NAN, f64::NEG_INFINITY), |best, cand| {
            if cand.1 > best.1 {
                cand
            } else {
                best
            }
        });
    let inv = 1.0 + 1.0 / alpha;
    let lambda = beta * beta * inv + 4.0 * beta * a1 / epsilon;
    let epsilon2 = nu0 / (4.0 * lambda);
    let nu = nu0 - 2.0 * epsilon2 * lambda;
    let c_kinetic = 8.0 * inv + 2.0 * (2.0 / epsilon2 + 1.0) * (beta * inv + 4.0 * a1 / epsilon);
    let chain = ConstantsChain {
        beta,
        alpha,
        epsilon,
        epsilon2,
        c_ab,
        nu0,
        nu,
        lambda,
        c_kinetic,
        c_macro: 0.5 * c_kinetic,
    };
    debug_assert!(chain.is_valid());
    Ok(chain)
}

impl ConstantsChain {
    /// Checks `1+α < 2/(β(3−β))`, `c_{α,β} > 0`, `ν⁰ > 0`, `ν > 0` and finite error constants.
    pub fn is_valid(&self) -> bool {
        let b = self.beta;
        0.0 < b
            && b < 1.0
            && self.alpha > 0.0
            && 1.0 + self.alpha < 2.0 / (b * (3.0 - b))
            && self.c_ab > 0.0
            && self.nu0 > 0.0
            && self.nu > 0.0
            && self.c_kinetic.is_finite()
            && self.c_kinetic >= 0.0
    }
}
