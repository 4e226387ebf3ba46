//! ξ-space quadrature for integrals against Maxwellians.
//!
//! Maxwellian integrands are smooth inside their supports and behave like
//! `√(distance to the edge)` at the support endpoints. The rule splits the
//! union of supports into panels at every endpoint (and at ξ = 0, where
//! upwind integrands switch branches), then applies Gauss–Legendre in the
//! variable θ of the substitution `ξ = m + r sin θ` on each panel. The
//! substitution turns square-root endpoint behaviour into an analytic
//! integrand, so the composite rule converges spectrally.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::{Arc, Mutex, OnceLock};

use crate::maxwellian::Maxwellian;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, p_prev) = legendre(n, x);
                dp = nf * (x * p - p_prev) / (x * x - 1.0);
                let dx = p / dp;
                x -= dx;
                if dx.abs() <= 1e-16 {
                    break;
                }
            }
            let (p, p_prev) = legendre(n, x);
            dp = if p.is_finite() {
                nf * (x * p - p_prev) / (x * x - 1.0)
            } else {
                dp
            };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// Shared rule for `n` nodes; built once per process.
    pub fn cached(n: usize) -> Arc<GaussLegendre> {
        static CACHE: OnceLock<Mutex<BTreeMap<usize, Arc<GaussLegendre>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
        let mut map = cache.lock().unwrap_or_else(|e| e.into_inner());
        map.entry(n)
            .or_insert_with(|| Arc::new(GaussLegendre::new(n)))
            .clone()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// Returns `(P_n(x), P_{n-1}(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    (p1, p0)
}

/// Composite rule over a union of Maxwellian supports.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    breaks: Vec<f64>,
    panels: Vec<(f64, f64)>,
}

impl QuadratureRule {
    /// Builds panels over the union of the supports of `maxwellians`, split at every
    /// support endpoint and at ξ = 0, with `nodes_per_panel` Gauss nodes each.
    pub fn for_maxwellians(maxwellians: &[Maxwellian], nodes_per_panel: usize) -> Self {
        Self::with_breaks(maxwellians, &[0.0], nodes_per_panel)
    }

    /// Same as [`QuadratureRule::for_maxwellians`] with caller-supplied extra break points.
    pub fn with_breaks(maxwellians: &[Maxwellian], extra: &[f64], nodes_per_panel: usize) -> Self {
        let reference = GaussLegendre::cached(nodes_per_panel);
        let supports: Vec<(f64, f64)> = maxwellians
            .iter()
            .filter(|m| m.is_wet())
            .map(|m| m.support())
            .collect();
        let mut breaks: Vec<f64> = supports.iter().flat_map(|&(a, b)| [a, b]).collect();
        breaks.extend(
            extra
                .iter()
                .copied()
                .filter(|x| supports.iter().any(|&(a, b)| a < *x && *x < b)),
        );
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();

        let mut panels = Vec::new();
        for w in breaks.windows(2) {
            let (a, b) = (w[0], w[1]);
            let mid = 0.5 * (a + b);
            if b > a && supports.iter().any(|&(lo, hi)| lo <= mid && mid <= hi) {
                panels.push((a, b));
            }
        }

        let mut nodes = Vec::with_capacity(panels.len() * reference.len());
        let mut weights = Vec::with_capacity(panels.len() * reference.len());
        for &(a, b) in &panels {
            let m = 0.5 * (a + b);
            let r = 0.5 * (b - a);
            for (x, w) in reference.nodes().iter().zip(reference.weights()) {
                let theta = FRAC_PI_2 * x;
                nodes.push(m + r * theta.sin());
                weights.push(FRAC_PI_2 * w * r * theta.cos());
            }
        }
        Self {
            nodes,
            weights,
            breaks,
            panels,
        }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Sorted panel break points (support endpoints and interior extra breaks).
    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn panels(&self) -> &[(f64, f64)] {
        &self.panels
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// Integrates a function already sampled on [`QuadratureRule::nodes`].
    pub fn integrate_values(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.nodes.len());
        values.iter().zip(&self.weights).map(|(v, w)| v * w).sum()
    }
}

/// Builds the rule adapted to the Maxwellians of `states`.
pub fn build_quadrature(maxwellians: &[Maxwellian], quad_nodes: usize) -> QuadratureRule {
    QuadratureRule::for_maxwellians(maxwellians, quad_nodes)
}
