//! Hydrostatic reconstruction and the explicit HR time step.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flux::{kinetic_flux, FluxPair};
use crate::maxwellian::{pressure, Maxwellian};
use crate::state::{max_wave_speed, ConservedState, Grid1D, SchemeParams};

/// Reconstructed states at the interface between cells `i` and `i+1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterfaceReconstruction {
    pub h_minus: f64,
    pub h_plus: f64,
    /// `(h₋, h₋ u_i)`.
    pub minus: ConservedState,
    /// `(h₊, h₊ u_{i+1})`.
    pub plus: ConservedState,
    pub u_minus: f64,
    pub u_plus: f64,
    pub z_star: f64,
    /// `z_{i+1} − z_i`.
    pub dz: f64,
}

impl InterfaceReconstruction {
    pub fn minus_maxwellian(&self, g: f64) -> Maxwellian {
        Maxwellian::new(self.h_minus, self.u_minus, g)
    }

    pub fn plus_maxwellian(&self, g: f64) -> Maxwellian {
        Maxwellian::new(self.h_plus, self.u_plus, g)
    }
}

fn reconstructed_height(h: f64, z: f64, z_star: f64) -> f64 {
    if z >= z_star {
        h
    } else {
        ((h + z) - z_star).max(0.0)
    }
}

/// `z* = max(z_i, z_{i+1})`, `h∓ = (h + z − z*)₊`, velocities carried over.
pub fn reconstruct(
    left: &ConservedState,
    right: &ConservedState,
    z_left: f64,
    z_right: f64,
    params: &SchemeParams,
) -> InterfaceReconstruction {
    let z_star = z_left.max(z_right);
    let h_l = left.h.max(0.0);
    let h_r = right.h.max(0.0);
    let h_minus = reconstructed_height(h_l, z_left, z_star);
    let h_plus = reconstructed_height(h_r, z_right, z_star);
    let u_minus = params.velocity(left);
    let u_plus = params.velocity(right);
    InterfaceReconstruction {
        h_minus,
        h_plus,
        minus: ConservedState::from_velocity(h_minus, u_minus),
        plus: ConservedState::from_velocity(h_plus, u_plus),
        u_minus,
        u_plus,
        z_star,
        dz: z_right - z_left,
    }
}

/// Homogeneous flux plus the two one-sided pressure corrections.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterfaceFluxes {
    /// `𝓕(U₋, U₊)`.
    pub homogeneous: FluxPair,
    /// `F_{i+1/2−}`, seen by the left cell.
    pub left: FluxPair,
    /// `F_{i+1/2+}`, seen by the right cell.
    pub right: FluxPair,
}

/// `F_{i+1/2∓} = 𝓕(U₋, U₊) + (0, g h²/2 − g h∓²/2)` with `h = h_i` or `h_{i+1}`.
pub fn hr_interface_fluxes(
    rec: &InterfaceReconstruction,
    h_left: f64,
    h_right: f64,
    g: f64,
) -> InterfaceFluxes {
    let homogeneous = kinetic_flux(&rec.minus_maxwellian(g), &rec.plus_maxwellian(g));
    let corrected = |h: f64, h_rec: f64| {
        let h = h.max(0.0);
        if h == h_rec {
            homogeneous
        } else {
            FluxPair::new(
                homogeneous.mass,
                pressure(h, g) + (homogeneous.momentum - pressure(h_rec, g)),
            )
        }
    };
    let left = corrected(h_left, rec.h_minus);
    let right = corrected(h_right, rec.h_plus);
    InterfaceFluxes {
        homogeneous,
        left,
        right,
    }
}

/// One interface of a [`StepReport`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterfaceData {
    pub reconstruction: InterfaceReconstruction,
    pub fluxes: InterfaceFluxes,
}

/// What one HR step did, kept for the auditor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepReport {
    pub dt: f64,
    /// Bound on every Maxwellian support, ghost cells included.
    pub v_m: f64,
    /// `Δt / Δx_i`.
    pub sigma: Vec<f64>,
    /// States with one ghost cell on each side.
    pub padded: Vec<ConservedState>,
    pub padded_z: Vec<f64>,
    /// Interface `k` sits between padded cells `k` and `k+1`, i.e. at `x_{k−1/2}` of the grid.
    pub interfaces: Vec<InterfaceData>,
}

impl StepReport {
    /// `F_{i+1/2−} − F_{i−1/2+}` for grid cell `i`.
    pub fn flux_difference(&self, i: usize) -> FluxPair {
        self.interfaces[i + 1].fluxes.left - self.interfaces[i].fluxes.right
    }

    /// Mass entering through the left boundary minus mass leaving through the right one.
    pub fn boundary_mass_inflow(&self) -> f64 {
        let n = self.interfaces.len();
        self.dt
            * (self.interfaces[0].fluxes.homogeneous.mass
                - self.interfaces[n - 1].fluxes.homogeneous.mass)
    }

    pub fn len(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }
}

/// `U_i − σ_i (F_{i+1/2−} − F_{i−1/2+})`, then clamped to the dry-state convention.
pub fn cell_update(
    state: &ConservedState,
    sigma: f64,
    diff: FluxPair,
    h_dry: f64,
) -> ConservedState {
    ConservedState::new(state.h - sigma * diff.mass, state.q - sigma * diff.momentum)
        .regularized(h_dry)
}

/// Interface reconstructions and fluxes for every interface of the padded grid.
pub fn interface_data(
    padded: &[ConservedState],
    padded_z: &[f64],
    params: &SchemeParams,
) -> Vec<InterfaceData> {
    padded
        .windows(2)
        .zip(padded_z.windows(2))
        .map(|(s, z)| {
            let rec = reconstruct(&s[0], &s[1], z[0], z[1], params);
            let fluxes = hr_interface_fluxes(&rec, s[0].h, s[1].h, params.g);
            InterfaceData {
                reconstruction: rec,
                fluxes,
            }
        })
        .collect()
}

/// One explicit HR step of length `dt`.
///
/// Fails without touching anything when `(dt / Δx_i) v_m > β` for some cell.
pub fn step(
    states: &[ConservedState],
    grid: &Grid1D,
    params: &SchemeParams,
    dt: f64,
) -> Result<(Vec<ConservedState>, StepReport)> {
    if !(dt >= 0.0 && dt.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "dt",
            reason: format!("time step must be finite and nonnegative, got {dt}"),
        });
    }
    let (padded, padded_z) = grid.with_ghosts(states)?;
    if let Some(s) = padded
        .iter()
        .find(|s| s.h < 0.0 || !s.h.is_finite() || !s.q.is_finite())
    {
        return Err(Error::NegativeHeight(s.h));
    }
    let v_m = max_wave_speed(&padded, params)?;
    let sigma: Vec<f64> = grid.widths().iter().map(|dx| dt / dx).collect();
    if let Some(&s) = sigma.iter().find(|&&s| s * v_m > params.beta) {
        return Err(Error::CflViolated {
            courant: s * v_m,
            beta: params.beta,
        });
    }

    let interfaces = interface_data(&padded, &padded_z, params);
    let new_states = states
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let diff = interfaces[i + 1].fluxes.left - interfaces[i].fluxes.right;
            cell_update(s, sigma[i], diff, params.h_dry)
        })
        .collect();
    Ok((
        new_states,
        StepReport {
            dt,
            v_m,
            sigma,
            padded,
            padded_z,
            interfaces,
        },
    ))
}

/// `Σ_i Δx_i h_i`, summed left to right.
pub fn total_mass(states: &[ConservedState], grid: &Grid1D) -> f64 {
    states
        .iter()
        .zip(grid.widths())
        .map(|(s, dx)| s.h * dx)
        .sum()
}
