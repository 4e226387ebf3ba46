//! State, grid and parameter types shared by the solver and the auditor.
//!
//! Units are SI throughout: heights and positions in metres, discharge in
//! m²/s, gravity in m/s². A cell whose height does not exceed the dry
//! tolerance carries zero velocity.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Water height and discharge `(h, hu)` of one cell.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ConservedState {
    pub h: f64,
    pub q: f64,
}

impl ConservedState {
    pub const DRY: ConservedState = ConservedState { h: 0.0, q: 0.0 };

    pub fn new(h: f64, q: f64) -> Self {
        Self { h, q }
    }

    pub fn from_velocity(h: f64, u: f64) -> Self {
        Self { h, q: h * u }
    }

    /// `q / h` above the dry tolerance, zero otherwise.
    #[inline]
    pub fn velocity(&self, h_dry: f64) -> f64 {
        if self.h > h_dry {
            self.q / self.h
        } else {
            0.0
        }
    }

    pub fn is_dry(&self, h_dry: f64) -> bool {
        self.h <= h_dry
    }

    /// Clamps roundoff-negative heights to zero and zeroes the discharge of dry cells.
    pub fn regularized(self, h_dry: f64) -> Self {
        let h = self.h.max(0.0);
        if h <= h_dry {
            Self { h, q: 0.0 }
        } else {
            Self { h, q: self.q }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    Periodic,
    /// Mirror height and topography, negate discharge.
    Reflective,
    /// Zero-gradient copy of the boundary cell.
    Outflow,
}

/// A 1D grid of cells `]x_{i-1/2}, x_{i+1/2}[` with piecewise-constant topography.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    interfaces: Vec<f64>,
    widths: Vec<f64>,
    z: Vec<f64>,
    boundary: Boundary,
}

impl Grid1D {
    pub fn new(interfaces: Vec<f64>, z: Vec<f64>, boundary: Boundary) -> Result<Self> {
        if interfaces.len() < 2 {
            return Err(Error::InvalidGrid("need at least one cell".into()));
        }
        let widths: Vec<f64> = interfaces.windows(2).map(|w| w[1] - w[0]).collect();
        if let Some(i) = widths.iter().position(|dx| !(*dx > 0.0 && dx.is_finite())) {
            return Err(Error::InvalidGrid(format!(
                "interfaces must be strictly increasing (cell {i} has width {})",
                widths[i]
            )));
        }
        if z.len() != widths.len() {
            return Err(Error::LengthMismatch {
                what: "topography",
                expected: widths.len(),
                got: z.len(),
            });
        }
        if z.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidGrid("topography must be finite".into()));
        }
        Ok(Self {
            interfaces,
            widths,
            z,
            boundary,
        })
    }

    /// Uniform grid on `[x_min, x_max]` with topography sampled at cell centres.
    pub fn uniform(
        x_min: f64,
        x_max: f64,
        cells: usize,
        boundary: Boundary,
        topography: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        if cells == 0 || !(x_max > x_min) {
            return Err(Error::InvalidGrid(format!(
                "bad uniform grid [{x_min}, {x_max}] with {cells} cells"
            )));
        }
        let dx = (x_max - x_min) / cells as f64;
        let interfaces: Vec<f64> = (0..=cells).map(|i| x_min + dx * i as f64).collect();
        let z = interfaces
            .windows(2)
            .map(|w| topography(0.5 * (w[0] + w[1])))
            .collect();
        Self::new(interfaces, z, boundary)
    }

    pub fn len(&self) -> usize {
        self.widths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.widths.is_empty()
    }

    pub fn interfaces(&self) -> &[f64] {
        &self.interfaces
    }

    pub fn widths(&self) -> &[f64] {
        &self.widths
    }

    pub fn topography(&self) -> &[f64] {
        &self.z
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn centers(&self) -> Vec<f64> {
        self.interfaces
            .windows(2)
            .map(|w| 0.5 * (w[0] + w[1]))
            .collect()
    }

    pub fn min_width(&self) -> f64 {
        self.widths.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Pads `states` and the topography with one ghost cell per side.
    pub fn with_ghosts(
        &self,
        states: &[ConservedState],
    ) -> Result<(Vec<ConservedState>, Vec<f64>)> {
        let n = self.len();
        if states.len() != n {
            return Err(Error::LengthMismatch {
                what: "states",
                expected: n,
                got: states.len(),
            });
        }
        let (left, zl, right, zr) = match self.boundary {
            Boundary::Periodic => (states[n - 1], self.z[n - 1], states[0], self.z[0]),
            Boundary::Reflective => (
                ConservedState::new(states[0].h, -states[0].q),
                self.z[0],
                ConservedState::new(states[n - 1].h, -states[n - 1].q),
                self.z[n - 1],
            ),
            Boundary::Outflow => (states[0], self.z[0], states[n - 1], self.z[n - 1]),
        };
        let mut padded = Vec::with_capacity(n + 2);
        padded.push(left);
        padded.extend_from_slice(states);
        padded.push(right);
        let mut z = Vec::with_capacity(n + 2);
        z.push(zl);
        z.extend_from_slice(&self.z);
        z.push(zr);
        Ok((padded, z))
    }
}

/// Numerical parameters of the scheme and the auditor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchemeParams {
    /// Gravity [m/s²].
    pub g: f64,
    /// CFL fraction, strictly inside (0, 1).
    pub beta: f64,
    /// Dry tolerance [m].
    pub h_dry: f64,
    /// Gauss nodes per quadrature panel.
    pub quad_nodes: usize,
    /// Audit tolerance on nondimensional residuals.
    pub quad_tol: f64,
}

impl Default for SchemeParams {
    fn default() -> Self {
        Self {
            g: 9.81,
            beta: 0.9,
            h_dry: 1e-12,
            quad_nodes: 64,
            quad_tol: 1e-9,
        }
    }
}

impl SchemeParams {
    pub fn new(g: f64, beta: f64) -> Result<Self> {
        Self {
            g,
            beta,
            ..Self::default()
        }
        .validated()
    }

    pub fn validated(self) -> Result<Self> {
        if !(self.g > 0.0 && self.g.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "g",
                reason: format!("gravity must be positive, got {}", self.g),
            });
        }
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return Err(Error::CflFractionOutOfRange(self.beta));
        }
        if !(self.h_dry > 0.0) {
            return Err(Error::InvalidParameter {
                name: "h_dry",
                reason: format!("dry tolerance must be positive, got {}", self.h_dry),
            });
        }
        if self.quad_nodes < 8 {
            return Err(Error::InvalidParameter {
                name: "quad_nodes",
                reason: format!("need at least 8 nodes per panel, got {}", self.quad_nodes),
            });
        }
        if !(self.quad_tol > 0.0) {
            return Err(Error::InvalidParameter {
                name: "quad_tol",
                reason: format!("tolerance must be positive, got {}", self.quad_tol),
            });
        }
        Ok(self)
    }

    #[inline]
    pub fn velocity(&self, state: &ConservedState) -> f64 {
        state.velocity(self.h_dry)
    }

    /// Largest |ξ| in the Maxwellian support of `state`: `|u| + √(2gh)`.
    #[inline]
    pub fn wave_speed(&self, state: &ConservedState) -> f64 {
        let h = state.h.max(0.0);
        self.velocity(state).abs() + (2.0 * self.g * h).sqrt()
    }
}

/// `velocity(U)` with the dry-state convention.
pub fn velocity(state: &ConservedState, params: &SchemeParams) -> f64 {
    params.velocity(state)
}

/// `v_m = max_i (|u_i| + √(2 g h_i))`, the bound on every Maxwellian support.
pub fn max_wave_speed(states: &[ConservedState], params: &SchemeParams) -> Result<f64> {
    if states.is_empty() {
        return Err(Error::EmptyState);
    }
    Ok(states
        .iter()
        .map(|s| params.wave_speed(s))
        .fold(0.0, f64::max))
}

/// Largest `Δt` with `(Δt / Δx_i) v_m ≤ β` on every cell, ghost cells included.
///
/// Returns `f64::INFINITY` when every state is dry; the caller clips to the end time.
pub fn cfl_timestep(
    states: &[ConservedState],
    grid: &Grid1D,
    params: &SchemeParams,
) -> Result<f64> {
    let (padded, _) = grid.with_ghosts(states)?;
    let v_m = max_wave_speed(&padded, params)?;
    if v_m == 0.0 {
        return Ok(f64::INFINITY);
    }
    let dx = grid.min_width();
    let mut dt = params.beta * dx / v_m;
    // rounding may push sigma * v_m one ulp above beta
    while dt / dx * v_m > params.beta {
        dt = dt.next_down();
    }
    Ok(dt)
}
