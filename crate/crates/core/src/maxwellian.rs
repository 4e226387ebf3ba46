//! The kinetic Maxwellian `M(U, ξ) = (1/gπ) (2gh − (ξ−u)²)_+^{1/2}`, the kinetic
//! entropy `H(f, ξ, z)` and their closed-form moment identities.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{ConservedState, SchemeParams};

/// `g²π²/6`, the coefficient of `f³` in the kinetic entropy.
#[inline]
pub fn cubic_coefficient(g: f64) -> f64 {
    g * g * PI * PI / 6.0
}

/// Hydrostatic pressure `g h²/2`.
#[inline]
pub fn pressure(h: f64, g: f64) -> f64 {
    0.5 * g * h * h
}

/// The Maxwellian of a state `(h, u)`; `c = √(2gh)` is its support half-width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Maxwellian {
    pub h: f64,
    pub u: f64,
    pub g: f64,
    pub c: f64,
}

impl Maxwellian {
    pub fn new(h: f64, u: f64, g: f64) -> Self {
        let h = h.max(0.0);
        let c = (2.0 * g * h).sqrt();
        // a dry state carries no velocity
        let u = if h > 0.0 { u } else { 0.0 };
        Self { h, u, g, c }
    }

    pub fn of(state: &ConservedState, params: &SchemeParams) -> Self {
        Self::new(state.h, params.velocity(state), params.g)
    }

    pub fn is_wet(&self) -> bool {
        self.c > 0.0
    }

    #[inline]
    pub fn eval(&self, xi: f64) -> f64 {
        let s = (xi - self.u).abs();
        if s >= self.c {
            return 0.0;
        }
        ((self.c - s) * (self.c + s)).sqrt() / (self.g * PI)
    }

    /// `[u − √(2gh), u + √(2gh)]`; degenerate `[u, u]` when dry.
    pub fn support(&self) -> (f64, f64) {
        (self.u - self.c, self.u + self.c)
    }

    /// Closed-form `(h, hu, hu² + gh²/2)`.
    pub fn moments(&self) -> [f64; 3] {
        [
            self.h,
            self.h * self.u,
            self.h * self.u * self.u + pressure(self.h, self.g),
        ]
    }

    /// `∫ (1, ξ, ξ²) M dξ` over `lo < ξ < hi`, in closed form.
    ///
    /// Uses the primitives of `tᵏ √(1 − t²)` in the normalised variable
    /// `t = (ξ − u)/c`. For a state at rest the half-lines ξ < 0 and ξ > 0
    /// each carry exactly half of the pressure, bit for bit.
    pub fn moments_between(&self, lo: f64, hi: f64) -> [f64; 3] {
        if !self.is_wet() || hi <= lo {
            return [0.0; 3];
        }
        let t_lo = self.normalized(lo);
        let t_hi = self.normalized(hi);
        let d0 = r0(t_hi) - r0(t_lo);
        let d1 = r1(t_hi) - r1(t_lo);
        let d2 = r2(t_hi) - r2(t_lo);
        let (h, u, c) = (self.h, self.u, self.c);
        let m0 = h * d0;
        let m1 = h * c * d1 + u * m0;
        let m2 = pressure(h, self.g) * d2 + 2.0 * u * h * c * d1 + u * u * m0;
        [m0, m1, m2]
    }

    /// Moments over ξ > 0.
    pub fn positive_moments(&self) -> [f64; 3] {
        if !self.is_wet() {
            return [0.0; 3];
        }
        let tau = (self.u + self.c) / self.c;
        if tau <= TAIL_LIMIT {
            let [m0, m1, m2] = tail_moments(self.h, self.c, tau);
            return [m0, -m1, m2];
        }
        self.moments_between(0.0, f64::INFINITY)
    }

    /// Moments over ξ < 0.
    pub fn negative_moments(&self) -> [f64; 3] {
        if !self.is_wet() {
            return [0.0; 3];
        }
        let tau = -(self.u - self.c) / self.c;
        if tau <= TAIL_LIMIT {
            return tail_moments(self.h, self.c, tau);
        }
        self.moments_between(f64::NEG_INFINITY, 0.0)
    }

    fn normalized(&self, xi: f64) -> f64 {
        if xi == f64::INFINITY {
            1.0
        } else if xi == f64::NEG_INFINITY {
            -1.0
        } else {
            ((xi - self.u) / self.c).clamp(-1.0, 1.0)
        }
    }

    /// `(η(U) + ghz, G(U) + ghzu)`, the closed forms of `∫H(M)` and `∫ξH(M)`.
    pub fn entropy_pair(&self, z: f64) -> (f64, f64) {
        entropy_pair(self.h, self.u, z, self.g)
    }

    /// `η'(U) · (1, ξ)ᵀ = gh − u²/2 + ξu`; zero for a dry state.
    #[inline]
    pub fn entropy_variable(&self, xi: f64) -> f64 {
        if self.h > 0.0 {
            self.g * self.h - 0.5 * self.u * self.u + xi * self.u
        } else {
            0.0
        }
    }
}

// primitives of tᵏ √(1 − t²), k = 0, 1, 2, scaled so that r(1) − r(−1) gives
// ∫M / h, ∫(ξ−u)M / (hc), ∫(ξ−u)²M / (gh²/2)
/// Below this normalised width a half-line piece is integrated from the support edge.
const TAIL_LIMIT: f64 = 0.5;

/// Moments of `M` over the piece `u − c < ξ < 0` of normalised width `τ = (c − u)/c`.
///
/// With `s = 1 + t`, `ξ = c(s − τ)` and `√(1 − t²) = √(s(2 − s))`; the integrals
/// `T_k = ∫₀^τ s^k √(s(2 − s)) ds` are summed from the binomial series of `√(2 − s)`.
fn tail_moments(h: f64, c: f64, tau: f64) -> [f64; 3] {
    if tau <= 0.0 {
        return [0.0; 3];
    }
    let mut t = [0.0f64; 3];
    let mut b = 1.0;
    let mut power = tau.powf(1.5);
    for n in 0..200 {
        let mut largest: f64 = 0.0;
        for (k, tk) in t.iter_mut().enumerate() {
            let term = b * power * tau.powi(k as i32) / (k as f64 + n as f64 + 1.5);
            *tk += term;
            largest = largest.max((term / *tk).abs());
        }
        if largest < 1e-18 {
            break;
        }
        b *= -0.5 * (0.5 - n as f64) / (n as f64 + 1.0);
        power *= tau;
    }
    let scale = 2.0 * h / PI * std::f64::consts::SQRT_2;
    [
        scale * t[0],
        scale * c * (t[1] - tau * t[0]),
        scale * c * c * (t[2] - 2.0 * tau * t[1] + tau * tau * t[0]),
    ]
}

fn r0(t: f64) -> f64 {
    (t * (1.0 - t * t).sqrt() + t.asin()) / PI
}

fn r1(t: f64) -> f64 {
    let w = 1.0 - t * t;
    -2.0 / (3.0 * PI) * w * w.sqrt()
}

fn r2(t: f64) -> f64 {
    (t.asin() - t * (1.0 - t * t).sqrt() * (1.0 - 2.0 * t * t)) / PI
}

/// `H(f, ξ, z) = ξ²f/2 + (g²π²/6) f³ + gzf`.
pub fn kinetic_entropy(f: f64, xi: f64, z: f64, g: f64) -> Result<f64> {
    if f < 0.0 {
        return Err(Error::NegativeDensity(f));
    }
    Ok(kinetic_entropy_unchecked(f, xi, z, g))
}

#[inline]
pub(crate) fn kinetic_entropy_unchecked(f: f64, xi: f64, z: f64, g: f64) -> f64 {
    0.5 * xi * xi * f + cubic_coefficient(g) * f * f * f + g * z * f
}

/// `∂_f H(f, ξ, z) = ξ²/2 + (g²π²/2) f² + gz`.
#[inline]
pub fn kinetic_entropy_derivative(f: f64, xi: f64, z: f64, g: f64) -> f64 {
    0.5 * xi * xi + 3.0 * cubic_coefficient(g) * f * f + g * z
}

/// Macroscopic energy `η(U) = hu²/2 + gh²/2`.
pub fn eta(h: f64, u: f64, g: f64) -> f64 {
    0.5 * h * u * u + pressure(h, g)
}

/// Energy flux `G(U) = (hu²/2 + gh²) u`.
pub fn eta_flux(h: f64, u: f64, g: f64) -> f64 {
    (0.5 * h * u * u + g * h * h) * u
}

/// `(η(U) + ghz, G(U) + ghzu)`.
pub fn entropy_pair(h: f64, u: f64, z: f64, g: f64) -> (f64, f64) {
    (eta(h, u, g) + g * h * z, eta_flux(h, u, g) + g * h * z * u)
}

/// `η'(U) = (gh − u²/2, u)`, defined as `(0, 0)` for a dry state.
pub fn eta_prime(h: f64, u: f64, g: f64) -> (f64, f64) {
    if h > 0.0 {
        (g * h - 0.5 * u * u, u)
    } else {
        (0.0, 0.0)
    }
}

/// `H₀(f) − H₀(M) − η'(U)(1, ξ)ᵀ (f − M)`, nonnegative for every `f ≥ 0`.
pub fn subdifferential_residual(m: &Maxwellian, f: f64, xi: f64) -> Result<f64> {
    if f < 0.0 {
        return Err(Error::NegativeDensity(f));
    }
    let mv = m.eval(xi);
    Ok(kinetic_entropy_unchecked(f, xi, 0.0, m.g)
        - kinetic_entropy_unchecked(mv, xi, 0.0, m.g)
        - m.entropy_variable(xi) * (f - mv))
}
