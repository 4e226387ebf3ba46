use serde::{Deserialize, Serialize};
use svkin::{
    counterexample_audit, entropy::counterexample_setup, max_wave_speed, CounterexampleAudit,
    SchemeParams,
};

use crate::config::Scenario;
use crate::error::{CliError, Result};
use crate::runner::{run, RunOptions};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefinementRow {
    pub cells: usize,
    pub dx: f64,
    /// `Σ_n Σ_i Δx_i max(D_i^n, 0)`, i.e. the time integral of `Σ_i Δx_i max(D_i^n, 0)/Δt^n`.
    pub violation: f64,
    /// `log₂(e_{k−1}/e_k)`; `None` on the first row and when the study is exact.
    pub order: Option<f64>,
    pub audit_violations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefinementStudy {
    pub name: String,
    pub rows: Vec<RefinementRow>,
    /// Every violation entry is below `tolerance`.
    pub exact: bool,
    pub tolerance: f64,
}

impl RefinementStudy {
    pub fn final_order(&self) -> Option<f64> {
        self.rows.last().and_then(|r| r.order)
    }

    pub fn is_monotone(&self) -> bool {
        self.rows
            .windows(2)
            .all(|w| w[1].violation < w[0].violation)
    }
}

/// Runs `scenario` at `levels` resolutions, doubling the cell count each time.
/// Levels run on separate threads.
pub fn refinement_study(scenario: &Scenario, levels: usize) -> Result<RefinementStudy> {
    if levels < 3 {
        return Err(CliError::Study(format!(
            "a refinement study needs at least 3 levels, got {levels}"
        )));
    }
    let topo = scenario
        .initial
        .topography_override()
        .unwrap_or_else(|| scenario.topography.clone());
    if !topo.is_lipschitz() {
        return Err(CliError::Study(
            "refinement study requires Lipschitz topography".into(),
        ));
    }
    let scenarios: Vec<Scenario> = (0..levels)
        .map(|k| scenario.with_cells(scenario.grid.cells << k))
        .collect();
    let results: Vec<Result<_>> = std::thread::scope(|scope| {
        let handles: Vec<_> = scenarios
            .iter()
            .map(|s| scope.spawn(move || run(s, &RunOptions::default())))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("refinement level panicked"))
            .collect()
    });

    let params = scenario.params()?;
    let h_ref = scenario.reference_height();
    let tolerance =
        params.quad_tol * params.g * h_ref * h_ref * (scenario.grid.x_max - scenario.grid.x_min);
    let mut rows = Vec::with_capacity(levels);
    for (s, r) in scenarios.iter().zip(results) {
        let summary = r?.summary;
        rows.push(RefinementRow {
            cells: s.grid.cells,
            dx: (s.grid.x_max - s.grid.x_min) / s.grid.cells as f64,
            violation: summary.integrated_violation,
            order: None,
            audit_violations: summary.violations,
        });
    }
    let exact = rows.iter().all(|r| r.violation <= tolerance);
    if !exact {
        for k in 1..rows.len() {
            rows[k].order = Some((rows[k - 1].violation / rows[k].violation).log2());
        }
    }
    Ok(RefinementStudy {
        name: scenario.name.clone(),
        rows,
        exact,
        tolerance,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleScan {
    pub v_m: f64,
    pub sigma_max: f64,
    pub rows: Vec<CounterexampleAudit>,
    /// `D > 0` at the jump cell for every `σ`.
    pub strictly_positive: bool,
    /// `D/σ` increases with `σ`.
    pub monotone: bool,
}

impl CounterexampleScan {
    pub fn passed(&self) -> bool {
        self.strictly_positive && self.monotone
    }
}

/// `β/v_m · 2^{-k}` for `k = n−1, …, 0`, ascending.
pub fn default_sigma_grid(beta: f64, v_m: f64, n: usize) -> Vec<f64> {
    (0..n)
        .rev()
        .map(|k| beta / v_m * 0.5f64.powi(k as i32))
        .collect()
}

/// Audits the moving false equilibrium at every `σ` of `sigmas` (all of `(0, β/v_m]` when empty).
pub fn counterexample_scan(
    h_l: f64,
    u: f64,
    z_l: f64,
    z_r: f64,
    sigmas: &[f64],
    params: &SchemeParams,
) -> Result<CounterexampleScan> {
    let (_, states) = counterexample_setup(h_l, u, z_l, z_r)?;
    let v_m = max_wave_speed(&states, params)?;
    let sigma_max = params.beta / v_m;
    let mut grid = if sigmas.is_empty() {
        default_sigma_grid(params.beta, v_m, 24)
    } else {
        sigmas.to_vec()
    };
    grid.sort_by(f64::total_cmp);
    if let Some(&s) = grid.iter().find(|&&s| !(s > 0.0 && s <= sigma_max)) {
        return Err(CliError::Study(format!(
            "sigma = {s} is outside (0, beta/v_m] = (0, {sigma_max}]"
        )));
    }
    let rows = grid
        .iter()
        .map(|&s| counterexample_audit(h_l, u, z_l, z_r, s, params))
        .collect::<svkin::Result<Vec<_>>>()?;
    Ok(CounterexampleScan {
        v_m,
        sigma_max,
        strictly_positive: rows.iter().all(|r| r.d > 0.0),
        monotone: rows
            .windows(2)
            .all(|w| w[1].d_over_sigma > w[0].d_over_sigma),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_grid_is_ascending_and_ends_at_the_cfl_limit() {
        let g = default_sigma_grid(0.9, 3.0, 4);
        assert_eq!(g, vec![0.0375, 0.075, 0.15, 0.3]);
    }

    #[test]
    fn scan_rejects_sigma_beyond_cfl() {
        let p = SchemeParams::new(1.0, 0.9).unwrap();
        assert!(counterexample_scan(2.0, 1.0, 0.0, 1.0, &[0.31], &p).is_err());
        let scan = counterexample_scan(2.0, 1.0, 0.0, 1.0, &[], &p).unwrap();
        assert!(scan.passed());
        assert_eq!(scan.v_m, 3.0);
    }
}
