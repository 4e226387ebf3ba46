use crate::entropy::constants::ConstantsChain;
use crate::kinetic::{indicators, KineticUpdate};
use crate::maxwellian::{
    cubic_coefficient, kinetic_entropy_derivative, kinetic_entropy_unchecked, Maxwellian,
};

impl KineticUpdate {
    pub fn maxwellian(&self) -> Maxwellian {
        Maxwellian::new(self.state.h, self.u_i, self.g)
    }

    /// `(H̃_{i+1/2−}, H̃_{i−1/2+})` at node `k`.
    pub fn tilde_h(&self, k: usize) -> (f64, f64) {
        let (first_r, rest_r, first_l, rest_l) = self.tilde_h_parts(k);
        (first_r + rest_r, first_l + rest_l)
    }

    /// The upwind first lines and the zero-integral remainders of `H̃_{i+1/2−}` and `H̃_{i−1/2+}`.
    pub fn tilde_h_parts(&self, k: usize) -> (f64, f64, f64, f64) {
        let xi = self.nodes()[k];
        let g = self.g;
        let (neg, pos) = indicators(xi);
        let (zr, zl, zi) = (self.right.z_star, self.left.z_star, self.z_i);
        let m = self.center[k];
        let a = self.right_plus[k];
        let b = self.right_minus[k];
        let p = self.left_minus[k];
        let q = self.left_plus[k];
        let h = |f: f64, z: f64| kinetic_entropy_unchecked(f, xi, z, g);
        let ev = self.maxwellian().entropy_variable(xi) + g * zi;

        let first_r = xi * neg * h(a, zr) + xi * pos * h(b, zr);
        let rest_r = xi * h(m, zi) - xi * h(b, zr) + ev * (xi * b - xi * m + self.delta_right[k]);
        let first_l = xi * neg * h(q, zl) + xi * pos * h(p, zl);
        let rest_l = xi * h(m, zi) - xi * h(q, zl) + ev * (xi * q - xi * m + self.delta_left[k]);
        (first_r, rest_r, first_l, rest_l)
    }

    /// `ΔM` part of the dissipation: `1_{ξ<0}(A+B)(A−B)² + 1_{ξ>0}(P+Q)(Q−P)²`.
    fn jump_dissipation(&self, k: usize) -> f64 {
        let (neg, pos) = indicators(self.nodes()[k]);
        let (a, b, p, q) = (
            self.right_plus[k],
            self.right_minus[k],
            self.left_minus[k],
            self.left_plus[k],
        );
        neg * (a + b) * (a - b) * (a - b) + pos * (p + q) * (q - p) * (q - p)
    }

    /// `M_i((M_i − M_{i+1/2−})² + (M_i − M_{i−1/2+})²)`.
    fn reconstruction_error(&self, k: usize) -> f64 {
        let m = self.center[k];
        let db = m - self.right_minus[k];
        let dq = m - self.left_plus[k];
        m * (db * db + dq * dq)
    }
}

/// Node-wise residual of the fully discrete kinetic entropy inequality:
///
/// `H(f, z_i) − H(M_i, z_i) + σ(H̃_{i+1/2−} − H̃_{i−1/2+}) + ν σ|ξ| K·jumps − C (σ v_m)² K·rec`,
/// with `K = g²π²/6`. Nonpositive up to roundoff under the CFL condition.
pub fn kinetic_inequality_residual(upd: &KineticUpdate, chain: &ConstantsChain) -> Vec<f64> {
    let g = upd.g;
    let kc = cubic_coefficient(g);
    let s = upd.sigma;
    let sv = s * upd.v_m;
    (0..upd.len())
        .map(|k| {
            let xi = upd.nodes()[k];
            let (tr, tl) = upd.tilde_h(k);
            kinetic_entropy_unchecked(upd.f[k], xi, upd.z_i, g)
                - kinetic_entropy_unchecked(upd.center[k], xi, upd.z_i, g)
                + s * (tr - tl)
                + chain.nu * s * xi.abs() * kc * upd.jump_dissipation(k)
                - chain.c_kinetic * sv * sv * kc * upd.reconstruction_error(k)
        })
        .collect()
}

/// Intermediate fields of the proof of the kinetic inequality, node by node.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualDecomposition {
    /// `∂_f H(M_i, z_i)(f − M_i)`.
    pub linear: Vec<f64>,
    /// `L_i = K (2M_i + f)(f − M_i)²`.
    pub remainder: Vec<f64>,
    /// `H(f) − H(M_i) − linear − L_i`, zero up to roundoff.
    pub expansion_defect: Vec<f64>,
    /// `d_i` in its first form.
    pub d: Vec<f64>,
    /// `d_i` through `γ±` and `μ±`.
    pub d_bis: Vec<f64>,
    pub gamma_minus: Vec<f64>,
    pub gamma_plus: Vec<f64>,
    pub mu_minus: Vec<f64>,
    pub mu_plus: Vec<f64>,
    /// `H(f) − H(M_i) + σ(H̃_{i+1/2−} − H̃_{i−1/2+}) − d_i`, nonpositive.
    pub before_estimates: Vec<f64>,
    /// `γ∓ − K c_{α,β}(sum of the two interface Maxwellians)` on the active side, nonnegative under CFL.
    pub gamma_margin: Vec<f64>,
}

pub fn residual_decomposition(
    upd: &KineticUpdate,
    chain: &ConstantsChain,
) -> ResidualDecomposition {
    let g = upd.g;
    let kc = cubic_coefficient(g);
    let s = upd.sigma;
    let u = upd.u_i;
    let a1 = 1.0 + chain.alpha;
    let inv = 1.0 + 1.0 / chain.alpha;
    let n = upd.len();
    let mut out = ResidualDecomposition {
        linear: Vec::with_capacity(n),
        remainder: Vec::with_capacity(n),
        expansion_defect: Vec::with_capacity(n),
        d: Vec::with_capacity(n),
        d_bis: Vec::with_capacity(n),
        gamma_minus: Vec::with_capacity(n),
        gamma_plus: Vec::with_capacity(n),
        mu_minus: Vec::with_capacity(n),
        mu_plus: Vec::with_capacity(n),
        before_estimates: Vec::with_capacity(n),
        gamma_margin: Vec::with_capacity(n),
    };
    for k in 0..n {
        let xi = upd.nodes()[k];
        let (neg, pos) = indicators(xi);
        let (m, f) = (upd.center[k], upd.f[k]);
        let (a, b, p, q) = (
            upd.right_plus[k],
            upd.right_minus[k],
            upd.left_minus[k],
            upd.left_plus[k],
        );
        let sx = s * xi;

        let h_f = kinetic_entropy_unchecked(f, xi, upd.z_i, g);
        let h_m = kinetic_entropy_unchecked(m, xi, upd.z_i, g);
        let linear = kinetic_entropy_derivative(m, xi, upd.z_i, g) * (f - m);
        let remainder = kc * (2.0 * m + f) * (f - m) * (f - m);

        let two_m_f = 2.0 * m + f;
        let d_ab = (a - b) * (a - b);
        let d_qp = (q - p) * (q - p);
        let d_bq = (b - q) * (b - q);
        let d = sx * neg * kc * (a + 2.0 * b + a1 * sx * two_m_f) * d_ab
            - sx * pos * kc * (p + 2.0 * q - a1 * sx * two_m_f) * d_qp
            + s * s * u * u * kc * inv * two_m_f * d_bq;

        let gamma_minus =
            kc * ((1.0 - a1 * sx * sx) * a + (2.0 + a1 * sx * sx + 3.0 * a1 * sx) * b);
        let gamma_plus = kc * ((1.0 - a1 * sx * sx) * p + (2.0 + a1 * sx * sx - 3.0 * a1 * sx) * q);
        let mu_minus = d_ab * (3.0 * (m - b) - s * u * (b - q));
        let mu_plus = d_qp * (3.0 * (m - q) - s * u * (b - q));
        let d_bis = sx * neg * gamma_minus * d_ab - sx * pos * gamma_plus * d_qp
            + s * s
                * kc
                * (inv * u * u * two_m_f * d_bq + a1 * xi * xi * (neg * mu_minus + pos * mu_plus));

        let (tr, tl) = upd.tilde_h(k);
        let margin = if xi < 0.0 {
            gamma_minus - kc * chain.c_ab * (a + b)
        } else if xi > 0.0 {
            gamma_plus - kc * chain.c_ab * (p + q)
        } else {
            0.0
        };

        out.linear.push(linear);
        out.remainder.push(remainder);
        out.expansion_defect.push(h_f - h_m - linear - remainder);
        out.d.push(d);
        out.d_bis.push(d_bis);
        out.gamma_minus.push(gamma_minus);
        out.gamma_plus.push(gamma_plus);
        out.mu_minus.push(mu_minus);
        out.mu_plus.push(mu_plus);
        out.before_estimates.push(h_f - h_m + s * (tr - tl) - d);
        out.gamma_margin.push(margin);
    }
    out
}
