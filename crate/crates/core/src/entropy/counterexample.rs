use serde::{Deserialize, Serialize};

use crate::entropy::macro_audit::local_dissipation;
use crate::error::{Error, Result};
use crate::hr::step;
use crate::state::{Boundary, ConservedState, Grid1D, SchemeParams};

/// Index of the last left cell in the counterexample grid.
pub const JUMP_CELL: usize = 1;

/// One HR step on the moving false equilibrium `h + z = const`, `u ≠ 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleAudit {
    pub sigma: f64,
    pub h_r: f64,
    pub v_m: f64,
    /// `D` at the jump cell.
    pub d: f64,
    pub d_over_sigma: f64,
    /// `lim_{σ→0} D/σ`, zero up to roundoff for this data.
    pub semi_discrete: f64,
    /// `D/σ = semi_discrete + σ·quadratic`.
    pub quadratic: f64,
    /// `D` on every cell of the four-cell grid.
    pub d_cells: Vec<f64>,
}

/// The four-cell, unit-width grid `[U_l, U_l | U_r, U_r]` with outflow boundaries.
pub fn counterexample_setup(
    h_l: f64,
    u: f64,
    z_l: f64,
    z_r: f64,
) -> Result<(Grid1D, Vec<ConservedState>)> {
    if !(z_r > z_l) {
        return Err(Error::InvalidParameter {
            name: "z_r",
            reason: format!("the right bottom must be higher, got z_l = {z_l}, z_r = {z_r}"),
        });
    }
    let h_r = h_l + z_l - z_r;
    if !(h_r > 0.0) {
        return Err(Error::InfeasibleData { h_r });
    }
    let grid = Grid1D::new(
        vec![0.0, 1.0, 2.0, 3.0, 4.0],
        vec![z_l, z_l, z_r, z_r],
        Boundary::Outflow,
    )?;
    let left = ConservedState::from_velocity(h_l, u);
    let right = ConservedState::from_velocity(h_r, u);
    Ok((grid, vec![left, left, right, right]))
}

/// Runs one step with `Δt = σ` (unit cells) and returns the dissipation at the jump cell.
pub fn counterexample_audit(
    h_l: f64,
    u: f64,
    z_l: f64,
    z_r: f64,
    sigma: f64,
    params: &SchemeParams,
) -> Result<CounterexampleAudit> {
    let (grid, states) = counterexample_setup(h_l, u, z_l, z_r)?;
    if !(sigma > 0.0) {
        return Err(Error::InvalidParameter {
            name: "sigma",
            reason: format!("sigma must be positive, got {sigma}"),
        });
    }
    let (next, report) = step(&states, &grid, params, sigma)?;
    let local = local_dissipation(&report, &states, &next, params)?;
    let jump = local[JUMP_CELL];
    Ok(CounterexampleAudit {
        sigma,
        h_r: states[2].h,
        v_m: report.v_m,
        d: jump.d,
        d_over_sigma: jump.d / sigma,
        semi_discrete: jump.semi_discrete,
        quadratic: jump.quadratic,
        d_cells: local.iter().map(|l| l.d).collect(),
    })
}
