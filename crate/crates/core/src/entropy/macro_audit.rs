use serde::{Deserialize, Serialize};

use crate::entropy::constants::ConstantsChain;
use crate::error::{Error, Result};
use crate::flux::{interface_rule, numerical_entropy_flux};
use crate::hr::StepReport;
use crate::maxwellian::{entropy_pair, eta};
use crate::state::{ConservedState, Grid1D, SchemeParams};

/// Local dissipation of one cell and its expansion in `σ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalDissipation {
    /// `η(U^{n+1}) + g z h^{n+1} − η(U) − g z h`.
    pub delta_e: f64,
    /// `σ (G̃_{i+1/2} − G̃_{i−1/2})`.
    pub flux_diff: f64,
    /// `D = delta_e + flux_diff`.
    pub d: f64,
    /// `lim_{σ→0} D/σ`; `NaN` for cells that are (or become) dry.
    pub semi_discrete: f64,
    /// `(D/σ − semi_discrete)/σ`; `NaN` for cells that are (or become) dry.
    pub quadratic: f64,
}

/// `G̃` at every interface of the step.
pub fn interface_entropy_fluxes(report: &StepReport, params: &SchemeParams) -> Vec<f64> {
    let g = params.g;
    report
        .interfaces
        .iter()
        .map(|it| {
            let minus = it.reconstruction.minus_maxwellian(g);
            let plus = it.reconstruction.plus_maxwellian(g);
            let rule = interface_rule(&minus, &plus, params.quad_nodes);
            numerical_entropy_flux(&minus, &plus, it.reconstruction.z_star, &rule)
        })
        .collect()
}

fn check_len(what: &'static str, expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::LengthMismatch {
            what,
            expected,
            got,
        });
    }
    Ok(())
}

/// `D_i^n` for every cell of a step.
///
/// Where the cell stays wet the energy difference is expanded in `σ`
/// (`D = σ S₀ + σ² Q`), so that `D` keeps its relative accuracy as `σ → 0`.
pub fn local_dissipation(
    report: &StepReport,
    states_n: &[ConservedState],
    states_np1: &[ConservedState],
    params: &SchemeParams,
) -> Result<Vec<LocalDissipation>> {
    let n = report.len();
    check_len("states before the step", n, states_n.len())?;
    check_len("states after the step", n, states_np1.len())?;
    let g = params.g;
    let g_tilde = interface_entropy_fluxes(report, params);
    Ok((0..n)
        .map(|i| {
            let z = report.padded_z[i + 1];
            let s = report.sigma[i];
            let (u0, u1) = (states_n[i], states_np1[i]);
            let (e0, _) = entropy_pair(u0.h, params.velocity(&u0), z, g);
            let (e1, _) = entropy_pair(u1.h, params.velocity(&u1), z, g);
            let delta_g = g_tilde[i + 1] - g_tilde[i];
            let delta_e = e1 - e0;
            let flux_diff = s * delta_g;

            let diff = report.flux_difference(i);
            let h_next = u0.h - s * diff.mass;
            if u0.h > params.h_dry && h_next > params.h_dry {
                let (a, b) = (diff.mass, diff.momentum);
                let u = u0.q / u0.h;
                let semi = -g * a * u0.h - g * z * a - b * u + 0.5 * a * u * u + delta_g;
                let quad = 0.5 * g * a * a + (b - u * a) * (b - u * a) / (2.0 * h_next);
                LocalDissipation {
                    delta_e,
                    flux_diff,
                    d: s * (semi + s * quad),
                    semi_discrete: semi,
                    quadratic: quad,
                }
            } else {
                LocalDissipation {
                    delta_e,
                    flux_diff,
                    d: delta_e + flux_diff,
                    semi_discrete: f64::NAN,
                    quadratic: f64::NAN,
                }
            }
        })
        .collect())
}

/// Per-step entropy budget of the HR scheme.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyAudit {
    pub step: usize,
    pub time: f64,
    pub dt: f64,
    pub delta_e: Vec<f64>,
    pub flux_diff: Vec<f64>,
    pub d: Vec<f64>,
    /// `C (σ_i v_m)² g ((h_i − h_{i+1/2−})² + (h_i − h_{i−1/2+})²)`.
    pub rhs: Vec<f64>,
    /// `D_i > RHS_i + tol`.
    pub flags: Vec<bool>,
    /// Cells where `0 ≤ h_i − h_rec ≤ |Δz|` fails on either side.
    pub reconstruction_flags: Vec<bool>,
    pub violations: usize,
    /// Cells with `D_i > tol`, i.e. violations if the error term were dropped.
    pub violations_without_error_term: usize,
    pub max_d: f64,
    /// `Σ Δx_i max(D_i, 0)`.
    pub positive_dissipation: f64,
    /// `sup D_i / ((σ_i v_m)² g(...))` over cells with `D_i > tol` and a nonzero denominator.
    pub empirical_constant: f64,
    /// Absolute tolerance used for the flags.
    pub tolerance: f64,
}

/// `0 ≤ h − h_rec ≤ |Δz|`, allowing for the rounding of `h + z − z*`.
fn reconstruction_bound_holds(h: f64, h_rec: f64, dz: f64, z: f64) -> bool {
    let slack = 4.0 * f64::EPSILON * (h.abs() + z.abs() + dz.abs());
    let drop = h - h_rec;
    drop >= -slack && drop <= dz.abs() + slack
}

/// Audits one HR step against the macroscopic entropy inequality with error term.
pub fn macro_audit(
    report: &StepReport,
    states_n: &[ConservedState],
    states_np1: &[ConservedState],
    grid: &Grid1D,
    chain: &ConstantsChain,
    params: &SchemeParams,
) -> Result<EntropyAudit> {
    let n = report.len();
    check_len("grid cells", n, grid.len())?;
    let local = local_dissipation(report, states_n, states_np1, params)?;
    let g = params.g;
    let h_ref = states_n
        .iter()
        .chain(states_np1)
        .map(|s| s.h)
        .fold(params.h_dry, f64::max);
    let tolerance = params.quad_tol * g * h_ref * h_ref;

    let mut audit = EntropyAudit {
        step: 0,
        time: 0.0,
        dt: report.dt,
        delta_e: Vec::with_capacity(n),
        flux_diff: Vec::with_capacity(n),
        d: Vec::with_capacity(n),
        rhs: Vec::with_capacity(n),
        flags: Vec::with_capacity(n),
        reconstruction_flags: Vec::with_capacity(n),
        violations: 0,
        violations_without_error_term: 0,
        max_d: f64::NEG_INFINITY,
        positive_dissipation: 0.0,
        empirical_constant: 0.0,
        tolerance,
    };
    for i in 0..n {
        let h = states_n[i].h;
        let z = report.padded_z[i + 1];
        let right = &report.interfaces[i + 1].reconstruction;
        let left = &report.interfaces[i].reconstruction;
        let sv = report.sigma[i] * report.v_m;
        let denominator = sv * sv * g * ((h - right.h_minus).powi(2) + (h - left.h_plus).powi(2));
        let rhs = chain.c_macro * denominator;
        let d = local[i].d;
        let flagged = d > rhs + tolerance;
        let rec_ok = reconstruction_bound_holds(h, right.h_minus, right.dz, z)
            && reconstruction_bound_holds(h, left.h_plus, left.dz, z);

        audit.delta_e.push(local[i].delta_e);
        audit.flux_diff.push(local[i].flux_diff);
        audit.d.push(d);
        audit.rhs.push(rhs);
        audit.flags.push(flagged);
        audit.reconstruction_flags.push(!rec_ok);
        audit.violations += usize::from(flagged || !rec_ok);
        audit.violations_without_error_term += usize::from(d > tolerance);
        audit.max_d = audit.max_d.max(d);
        audit.positive_dissipation += grid.widths()[i] * d.max(0.0);
        if denominator > 0.0 && d > tolerance {
            audit.empirical_constant = audit.empirical_constant.max(d / denominator);
        }
    }
    Ok(audit)
}

/// `η(U) + g z h` summed over cells with their widths.
pub fn total_energy(states: &[ConservedState], grid: &Grid1D, params: &SchemeParams) -> f64 {
    states
        .iter()
        .zip(grid.widths())
        .zip(grid.topography())
        .map(|((s, dx), z)| dx * (eta(s.h, params.velocity(s), params.g) + params.g * z * s.h))
        .sum()
}
