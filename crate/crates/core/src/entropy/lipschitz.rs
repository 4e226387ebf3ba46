use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::maxwellian::Maxwellian;
use crate::quadrature::QuadratureRule;
use crate::state::{ConservedState, SchemeParams};

/// Both sides of the two L² Lipschitz estimates of the Maxwellian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LipschitzAudit {
    /// `∫ M₁ (M₁ − M₂)² dξ`.
    pub lhs1: f64,
    /// `3/(g²π²) (g(h₂−h₁)² + min(h₁,h₂)(u₂−u₁)²)`.
    pub rhs1: f64,
    /// `∫ M₃ (M₁ − M₂)² dξ`.
    pub lhs3: f64,
    pub rhs3: f64,
}

impl LipschitzAudit {
    /// Smallest of `rhs − lhs` over both estimates.
    pub fn margin(&self) -> f64 {
        (self.rhs1 - self.lhs1).min(self.rhs3 - self.lhs3)
    }
}

fn rhs_pair(a: &Maxwellian, b: &Maxwellian, g: f64) -> f64 {
    g * (b.h - a.h).powi(2) + a.h.min(b.h) * (b.u - a.u).powi(2)
}

pub fn lipschitz_audit(
    u1: &ConservedState,
    u2: &ConservedState,
    u3: &ConservedState,
    params: &SchemeParams,
) -> LipschitzAudit {
    let g = params.g;
    let m1 = Maxwellian::of(u1, params);
    let m2 = Maxwellian::of(u2, params);
    let m3 = Maxwellian::of(u3, params);
    let rule = QuadratureRule::for_maxwellians(&[m1, m2, m3], params.quad_nodes);
    let (mut lhs1, mut lhs3) = (0.0, 0.0);
    for (&xi, &w) in rule.nodes().iter().zip(rule.weights()) {
        let (a, b, c) = (m1.eval(xi), m2.eval(xi), m3.eval(xi));
        lhs1 += w * a * (a - b) * (a - b);
        lhs3 += w * c * (a - b) * (a - b);
    }
    let k = 1.0 / (g * g * PI * PI);
    LipschitzAudit {
        lhs1,
        rhs1: 3.0 * k * rhs_pair(&m1, &m2, g),
        lhs3,
        rhs3: 6.0 * k * (rhs_pair(&m1, &m3, g) + rhs_pair(&m2, &m3, g)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_states() {
        let p = SchemeParams::default();
        let u = ConservedState::new(1.3, 0.4);
        let a = lipschitz_audit(&u, &u, &u, &p);
        assert_eq!(a.lhs1, 0.0);
        assert_eq!(a.rhs1, 0.0);
    }

    #[test]
    fn velocity_shift_example() {
        let p = SchemeParams::new(1.0, 0.5).unwrap();
        let a = lipschitz_audit(
            &ConservedState::new(1.0, 0.0),
            &ConservedState::new(1.0, 0.3),
            &ConservedState::new(1.0, 0.0),
            &p,
        );
        assert!((a.rhs1 - 3.0 / (PI * PI) * 0.09).abs() < 1e-15);
        assert!((a.rhs1 - 0.02736).abs() < 1e-5);
        assert!(a.lhs1 > 0.0 && a.lhs1 <= a.rhs1);
        assert!(a.margin() >= 0.0);
    }
}
