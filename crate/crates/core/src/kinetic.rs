//! Kinetic form of the HR step: the updated density `f_i^{n+1−}(ξ)` on quadrature nodes.

use crate::error::{Error, Result};
use crate::hr::{reconstruct, InterfaceReconstruction};
use crate::maxwellian::Maxwellian;
use crate::quadrature::QuadratureRule;
use crate::state::{max_wave_speed, ConservedState, SchemeParams};

/// `δM = (ξ − u_i)(M(U_i, ξ) − M((h_rec, h_rec u_i), ξ))`.
pub fn delta_maxwellian(m: &Maxwellian, rec_height: f64, xi: f64) -> f64 {
    let rec = Maxwellian::new(rec_height, m.u, m.g);
    delta_between(m, &rec, xi)
}

#[inline]
fn delta_between(m: &Maxwellian, rec: &Maxwellian, xi: f64) -> f64 {
    let mi = m.eval(xi);
    if mi == 0.0 {
        return 0.0;
    }
    (xi - m.u) * (mi - rec.eval(xi))
}

/// `f_i^{n+1−}` and its ingredients, sampled on the nodes of `rule`.
///
/// Naming at node `k`: `center` is `M_i`, `right_plus`/`right_minus` are
/// `M_{i+1/2±}`, `left_minus`/`left_plus` are `M_{i−1/2±}`.
#[derive(Debug, Clone)]
pub struct KineticUpdate {
    pub sigma: f64,
    /// Bound on the supports of the three cell Maxwellians.
    pub v_m: f64,
    pub g: f64,
    pub u_i: f64,
    pub z_i: f64,
    pub state: ConservedState,
    pub left: InterfaceReconstruction,
    pub right: InterfaceReconstruction,
    pub rule: QuadratureRule,
    pub center: Vec<f64>,
    pub right_plus: Vec<f64>,
    pub right_minus: Vec<f64>,
    pub left_minus: Vec<f64>,
    pub left_plus: Vec<f64>,
    /// `δM_{i+1/2−}`.
    pub delta_right: Vec<f64>,
    /// `δM_{i−1/2+}`.
    pub delta_left: Vec<f64>,
    pub f: Vec<f64>,
}

impl KineticUpdate {
    pub fn nodes(&self) -> &[f64] {
        self.rule.nodes()
    }

    pub fn len(&self) -> usize {
        self.f.len()
    }

    pub fn is_empty(&self) -> bool {
        self.f.is_empty()
    }

    /// `∫ (1, ξ) f dξ`.
    pub fn moments(&self) -> (f64, f64) {
        let mut m = (0.0, 0.0);
        for ((&xi, &w), &f) in self
            .rule
            .nodes()
            .iter()
            .zip(self.rule.weights())
            .zip(&self.f)
        {
            m.0 += w * f;
            m.1 += w * xi * f;
        }
        m
    }

    /// `f` from the unsimplified update with the upwind indicators and both `δM` terms.
    pub fn general_form(&self, k: usize) -> f64 {
        let xi = self.nodes()[k];
        let (neg, pos) = indicators(xi);
        let bracket =
            xi * neg * self.right_plus[k] + xi * pos * self.right_minus[k] + self.delta_right[k]
                - xi * pos * self.left_minus[k]
                - xi * neg * self.left_plus[k]
                - self.delta_left[k];
        self.center[k] - self.sigma * bracket
    }
}

/// `(1_{ξ<0}, 1_{ξ>0})`.
#[inline]
pub(crate) fn indicators(xi: f64) -> (f64, f64) {
    (
        if xi < 0.0 { 1.0 } else { 0.0 },
        if xi > 0.0 { 1.0 } else { 0.0 },
    )
}

/// Builds `f_i^{n+1−}` for cell `i` from the triple `(U_{i−1}, U_i, U_{i+1})`.
///
/// Refuses when `σ v_m > β` with `v_m` taken over the three states.
pub fn kinetic_update(
    states: [ConservedState; 3],
    z: [f64; 3],
    sigma: f64,
    params: &SchemeParams,
) -> Result<KineticUpdate> {
    if let Some(s) = states.iter().find(|s| !(s.h >= 0.0)) {
        return Err(Error::NegativeHeight(s.h));
    }
    let v_m = max_wave_speed(&states, params)?;
    if !(sigma >= 0.0) || sigma * v_m > params.beta {
        return Err(Error::CflViolated {
            courant: sigma * v_m,
            beta: params.beta,
        });
    }
    let g = params.g;
    let left = reconstruct(&states[0], &states[1], z[0], z[1], params);
    let right = reconstruct(&states[1], &states[2], z[1], z[2], params);
    let m_i = Maxwellian::of(&states[1], params);
    let a = right.plus_maxwellian(g);
    let b = right.minus_maxwellian(g);
    let p = left.minus_maxwellian(g);
    let q = left.plus_maxwellian(g);
    let rule = QuadratureRule::for_maxwellians(&[m_i, a, b, p, q], params.quad_nodes);

    let n = rule.len();
    let mut upd = KineticUpdate {
        sigma,
        v_m,
        g,
        u_i: m_i.u,
        z_i: z[1],
        state: states[1],
        left,
        right,
        center: Vec::with_capacity(n),
        right_plus: Vec::with_capacity(n),
        right_minus: Vec::with_capacity(n),
        left_minus: Vec::with_capacity(n),
        left_plus: Vec::with_capacity(n),
        delta_right: Vec::with_capacity(n),
        delta_left: Vec::with_capacity(n),
        f: Vec::with_capacity(n),
        rule,
    };
    let u = m_i.u;
    for &xi in upd.rule.nodes() {
        let (mv, av, bv, pv, qv) = (m_i.eval(xi), a.eval(xi), b.eval(xi), p.eval(xi), q.eval(xi));
        let f = if xi <= 0.0 {
            mv - sigma * (xi * (av - bv) + u * (bv - qv))
        } else {
            mv - sigma * (xi * (qv - pv) + u * (bv - qv))
        };
        upd.center.push(mv);
        upd.right_plus.push(av);
        upd.right_minus.push(bv);
        upd.left_minus.push(pv);
        upd.left_plus.push(qv);
        upd.delta_right.push(delta_between(&m_i, &b, xi));
        upd.delta_left.push(delta_between(&m_i, &q, xi));
        upd.f.push(f);
    }
    Ok(upd)
}

/// Smallest node value of `f_i^{n+1−}`; `+∞` when there are no nodes.
pub fn positivity_margin(upd: &KineticUpdate) -> f64 {
    upd.f.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Relative support margin excluded by [`consistency_probe`].
pub const PROBE_EDGE_MARGIN: f64 = 1e-3;

/// Largest deviation between `δM/Δx` and the topography source term
/// `g (z* − z_i)/Δx · (ξ − u)/(2gh − (ξ − u)²) · M` at interior nodes.
///
/// `z_left_inc = z_{i−1} − z_i` and `z_right_inc = z_{i+1} − z_i`. Nodes with
/// `|ξ − u| > (1 − 10⁻³)√(2gh)` are skipped.
pub fn consistency_probe(
    state: &ConservedState,
    z_left_inc: f64,
    z_right_inc: f64,
    dx: f64,
    params: &SchemeParams,
) -> Result<f64> {
    if !(state.h > params.h_dry) {
        return Err(Error::InvalidParameter {
            name: "h",
            reason: format!("the probe needs a wet cell, got h = {}", state.h),
        });
    }
    if !(dx > 0.0) {
        return Err(Error::InvalidGrid(format!(
            "cell width must be positive, got {dx}"
        )));
    }
    let m = Maxwellian::of(state, params);
    let rule = QuadratureRule::for_maxwellians(&[m], params.quad_nodes);
    let g = params.g;
    let limit = (1.0 - PROBE_EDGE_MARGIN) * m.c;
    let mut worst: f64 = 0.0;
    for inc in [z_left_inc, z_right_inc] {
        let rise = inc.max(0.0);
        let rec = Maxwellian::new((state.h - rise).max(0.0), m.u, g);
        for &xi in rule.nodes() {
            let s = xi - m.u;
            if s.abs() > limit {
                continue;
            }
            let mv = m.eval(xi);
            let source = g * (rise / dx) * s / (m.c * m.c - s * s) * mv;
            let delta = delta_between(&m, &rec, xi) / dx;
            worst = worst.max((delta - source).abs());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> SchemeParams {
        SchemeParams::new(9.81, 0.9).unwrap()
    }

    #[test]
    fn delta_maxwellian_examples() {
        let m = Maxwellian::new(1.4, 0.3, 9.81);
        for xi in [-3.0, -0.5, 0.3, 1.0, 4.0] {
            assert_eq!(delta_maxwellian(&m, 1.4, xi), 0.0);
        }
        assert_eq!(delta_maxwellian(&m, 0.7, 0.3), 0.0);
        // outside the support of M_i
        assert_eq!(delta_maxwellian(&m, 0.7, 10.0), 0.0);
    }

    #[test]
    fn delta_maxwellian_moments() {
        let (h, hr, g) = (1.4, 0.9, 9.81);
        let m = Maxwellian::new(h, 0.3, g);
        let rule = QuadratureRule::for_maxwellians(&[m, Maxwellian::new(hr, 0.3, g)], 64);
        let m0 = rule.integrate(|x| delta_maxwellian(&m, hr, x));
        let m1 = rule.integrate(|x| x * delta_maxwellian(&m, hr, x));
        assert!(m0.abs() < 1e-13);
        assert!((m1 - 0.5 * g * (h * h - hr * hr)).abs() < 1e-12);
    }

    #[test]
    fn lake_at_rest_keeps_the_maxwellian() {
        let s = [
            ConservedState::new(1.5, 0.0),
            ConservedState::new(1.0, 0.0),
            ConservedState::new(0.75, 0.0),
        ];
        let upd = kinetic_update(s, [0.0, 0.5, 0.75], 0.05, &params()).unwrap();
        for (f, m) in upd.f.iter().zip(&upd.center) {
            assert!((f - m).abs() <= 1e-15 * m.max(1.0));
        }
        assert_eq!(
            positivity_margin(&upd),
            upd.center.iter().copied().fold(f64::INFINITY, f64::min)
        );
    }

    #[test]
    fn zero_sigma_gives_the_maxwellian() {
        let s = [
            ConservedState::new(1.5, 0.3),
            ConservedState::new(1.0, -0.2),
            ConservedState::new(0.2, 0.9),
        ];
        let upd = kinetic_update(s, [0.1, 0.5, 0.0], 0.0, &params()).unwrap();
        assert_eq!(upd.f, upd.center);
    }

    #[test]
    fn branch_formulas_match_the_general_form() {
        let s = [
            ConservedState::new(1.5, 0.3),
            ConservedState::new(1.0, -0.2),
            ConservedState::new(0.6, 0.9),
        ];
        let upd = kinetic_update(s, [0.1, 0.5, 0.2], 0.05, &params()).unwrap();
        for k in 0..upd.len() {
            assert!((upd.f[k] - upd.general_form(k)).abs() < 1e-14);
        }
    }

    #[test]
    fn moments_reproduce_the_hr_update() {
        let p = params();
        let s = [
            ConservedState::new(1.5, 0.3),
            ConservedState::new(1.0, -0.2),
            ConservedState::new(0.6, 0.9),
        ];
        let z = [0.1, 0.5, 0.2];
        let sigma = 0.05;
        let upd = kinetic_update(s, z, sigma, &p).unwrap();
        let fl = crate::hr::hr_interface_fluxes(&upd.left, s[0].h, s[1].h, p.g);
        let fr = crate::hr::hr_interface_fluxes(&upd.right, s[1].h, s[2].h, p.g);
        let h = s[1].h - sigma * (fr.left.mass - fl.right.mass);
        let q = s[1].q - sigma * (fr.left.momentum - fl.right.momentum);
        let (m0, m1) = upd.moments();
        assert!((m0 - h).abs() < 1e-12);
        assert!((m1 - q).abs() < 1e-12);
    }

    #[test]
    fn broken_cfl_is_refused() {
        let s = [ConservedState::new(1.0, 0.0); 3];
        let v_m = (2.0 * 9.81f64).sqrt();
        let err = kinetic_update(s, [0.0; 3], 1.5 / v_m, &params()).unwrap_err();
        assert!(matches!(err, Error::CflViolated { .. }));
    }

    #[test]
    fn consistency_probe_is_first_order() {
        let p = params();
        let s = ConservedState::new(1.0, 0.4);
        assert_eq!(consistency_probe(&s, 0.0, 0.0, 0.1, &p).unwrap(), 0.0);
        let slope = 0.5;
        let dz = 1e-5;
        let r1 = consistency_probe(&s, -dz, dz, dz / slope, &p).unwrap();
        let r2 = consistency_probe(&s, -dz / 2.0, dz / 2.0, dz / 2.0 / slope, &p).unwrap();
        let ratio = r2 / r1;
        assert!((0.4..=0.6).contains(&ratio), "ratio {ratio}");
    }
}
