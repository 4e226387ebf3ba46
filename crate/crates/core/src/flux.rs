//! Kinetic flux-vector-splitting flux and the numerical entropy fluxes.

use std::ops::{Add, Sub};

use serde::{Deserialize, Serialize};

use crate::maxwellian::{kinetic_entropy_unchecked, Maxwellian};
use crate::quadrature::QuadratureRule;
use crate::state::{ConservedState, SchemeParams};

/// Mass and momentum components of a numerical flux.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FluxPair {
    pub mass: f64,
    pub momentum: f64,
}

impl FluxPair {
    pub const ZERO: FluxPair = FluxPair {
        mass: 0.0,
        momentum: 0.0,
    };

    pub fn new(mass: f64, momentum: f64) -> Self {
        Self { mass, momentum }
    }

    /// Physical flux `(hu, hu² + gh²/2)`.
    pub fn exact(m: &Maxwellian) -> Self {
        let [_, q, p] = m.moments();
        Self::new(q, p)
    }

    pub fn is_finite(&self) -> bool {
        self.mass.is_finite() && self.momentum.is_finite()
    }
}

impl Add for FluxPair {
    type Output = FluxPair;
    fn add(self, rhs: FluxPair) -> FluxPair {
        FluxPair::new(self.mass + rhs.mass, self.momentum + rhs.momentum)
    }
}

impl Sub for FluxPair {
    type Output = FluxPair;
    fn sub(self, rhs: FluxPair) -> FluxPair {
        FluxPair::new(self.mass - rhs.mass, self.momentum - rhs.momentum)
    }
}

/// `∫_{ξ>0} ξ(1, ξ) M_l dξ + ∫_{ξ<0} ξ(1, ξ) M_r dξ`, in closed form.
pub fn kinetic_flux(left: &Maxwellian, right: &Maxwellian) -> FluxPair {
    let [_, l1, l2] = left.positive_moments();
    let [_, r1, r2] = right.negative_moments();
    FluxPair::new(l1 + r1, l2 + r2)
}

/// [`kinetic_flux`] on conserved states.
pub fn kinetic_flux_states(
    left: &ConservedState,
    right: &ConservedState,
    params: &SchemeParams,
) -> FluxPair {
    kinetic_flux(
        &Maxwellian::of(left, params),
        &Maxwellian::of(right, params),
    )
}

/// The same half-line integrals as [`kinetic_flux`], by quadrature.
///
/// `rule` must break at ξ = 0 and at the support endpoints of both Maxwellians.
pub fn kinetic_flux_quadrature(
    left: &Maxwellian,
    right: &Maxwellian,
    rule: &QuadratureRule,
) -> FluxPair {
    let mut flux = FluxPair::ZERO;
    for (&xi, &w) in rule.nodes().iter().zip(rule.weights()) {
        let f = if xi > 0.0 {
            left.eval(xi)
        } else {
            right.eval(xi)
        };
        flux.mass += w * xi * f;
        flux.momentum += w * xi * xi * f;
    }
    flux
}

/// Rule adapted to an interface pair.
pub fn interface_rule(
    left: &Maxwellian,
    right: &Maxwellian,
    nodes_per_panel: usize,
) -> QuadratureRule {
    QuadratureRule::for_maxwellians(&[*left, *right], nodes_per_panel)
}

/// Upwind entropy flux `∫_{ξ>0} ξ H(M_l, ξ, z) dξ + ∫_{ξ<0} ξ H(M_r, ξ, z) dξ`.
fn upwind_entropy_flux(
    left: &Maxwellian,
    right: &Maxwellian,
    z: f64,
    rule: &QuadratureRule,
) -> f64 {
    let g = left.g;
    rule.nodes()
        .iter()
        .zip(rule.weights())
        .map(|(&xi, &w)| {
            let f = if xi > 0.0 {
                left.eval(xi)
            } else {
                right.eval(xi)
            };
            w * xi * kinetic_entropy_unchecked(f, xi, z, g)
        })
        .sum()
}

/// Entropy flux of the scheme without topography, `𝒢(U_l, U_r)`.
pub fn homogeneous_entropy_flux(
    left: &Maxwellian,
    right: &Maxwellian,
    rule: &QuadratureRule,
) -> f64 {
    upwind_entropy_flux(left, right, 0.0, rule)
}

/// `G̃ = ∫_{ξ<0} ξ H(M₊, ξ, z*) dξ + ∫_{ξ>0} ξ H(M₋, ξ, z*) dξ` at an interface with
/// reconstructed states `minus` (left) and `plus` (right).
pub fn numerical_entropy_flux(
    minus: &Maxwellian,
    plus: &Maxwellian,
    z_star: f64,
    rule: &QuadratureRule,
) -> f64 {
    upwind_entropy_flux(minus, plus, z_star, rule)
}

/// `G̃` through `𝒢(U₋, U₊) + g z* 𝓕⁰(U₋, U₊)`.
pub fn numerical_entropy_flux_split(
    minus: &Maxwellian,
    plus: &Maxwellian,
    z_star: f64,
    rule: &QuadratureRule,
) -> f64 {
    homogeneous_entropy_flux(minus, plus, rule) + minus.g * z_star * kinetic_flux(minus, plus).mass
}
