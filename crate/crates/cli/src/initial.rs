use serde::{Deserialize, Serialize};
use svkin::ConservedState;

use crate::error::{CliError, Result};
use crate::topography::{interpolate, validate_table, TopographySpec};

/// Initial water height [m] and velocity [m/s].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialSpec {
    /// `h = (surface − z)₊`, `u = 0`.
    LakeAtRest { surface: f64 },
    DamBreak {
        h_l: f64,
        h_r: f64,
        #[serde(default)]
        u_l: f64,
        #[serde(default)]
        u_r: f64,
        x_jump: f64,
    },
    /// Step bottom `z_l | z_r` at `x_jump` with `h + z = h_l + z_l` and uniform `u`.
    /// Supplies its own topography.
    MovingFalseEquilibrium {
        h_l: f64,
        u: f64,
        z_l: f64,
        z_r: f64,
        x_jump: f64,
    },
    Table {
        x: Vec<f64>,
        h: Vec<f64>,
        #[serde(default)]
        u: Option<Vec<f64>>,
    },
}

impl InitialSpec {
    pub fn validate(&self, topography: &TopographySpec) -> Result<()> {
        let bad = |msg: String| Err(CliError::Config(msg));
        match self {
            InitialSpec::LakeAtRest { surface } if !surface.is_finite() => {
                bad(format!("initial.surface: must be finite, got {surface}"))
            }
            InitialSpec::DamBreak { h_l, h_r, .. } if !(*h_l >= 0.0 && *h_r >= 0.0) => {
                bad(format!(
                    "initial: dam break heights must be nonnegative, got h_l = {h_l}, h_r = {h_r}"
                ))
            }
            InitialSpec::MovingFalseEquilibrium { h_l, z_l, z_r, .. } => {
                if *topography != TopographySpec::default() {
                    return bad(
                        "topography: moving_false_equilibrium defines its own step bottom; \
                                leave [topography] out"
                            .into(),
                    );
                }
                let h_r = h_l + z_l - z_r;
                if !(h_r > 0.0) {
                    return bad(format!(
                        "initial: h_r = h_l + z_l - z_r must be positive, got {h_r} \
                         (h_l = {h_l}, z_l = {z_l}, z_r = {z_r})"
                    ));
                }
                if !(*h_l > 0.0) {
                    return bad(format!("initial.h_l: must be positive, got {h_l}"));
                }
                Ok(())
            }
            InitialSpec::Table { x, h, u } => {
                let mut cols = vec![("h", h)];
                if let Some(u) = u {
                    cols.push(("u", u));
                }
                validate_table("initial", x, &cols)?;
                if h.iter().any(|&v| v < 0.0) {
                    return bad("initial.h: heights must be nonnegative".into());
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// The bottom this initial condition imposes, if any.
    pub fn topography_override(&self) -> Option<TopographySpec> {
        match self {
            InitialSpec::MovingFalseEquilibrium {
                z_l, z_r, x_jump, ..
            } => Some(TopographySpec::Table {
                x: vec![*x_jump, *x_jump],
                z: vec![*z_l, *z_r],
            }),
            _ => None,
        }
    }

    pub fn state(&self, x: f64, z: f64) -> ConservedState {
        match self {
            InitialSpec::LakeAtRest { surface } => ConservedState::new((surface - z).max(0.0), 0.0),
            InitialSpec::DamBreak {
                h_l,
                h_r,
                u_l,
                u_r,
                x_jump,
            } => {
                if x < *x_jump {
                    ConservedState::from_velocity(*h_l, *u_l)
                } else {
                    ConservedState::from_velocity(*h_r, *u_r)
                }
            }
            InitialSpec::MovingFalseEquilibrium { h_l, u, z_l, .. } => {
                ConservedState::from_velocity((h_l + z_l - z).max(0.0), *u)
            }
            InitialSpec::Table { x: xs, h, u } => {
                let hv = interpolate(xs, h, x).max(0.0);
                let uv = u.as_ref().map_or(0.0, |u| interpolate(xs, u, x));
                ConservedState::from_velocity(hv, uv)
            }
        }
    }

    /// Upper bound on the initial height, used to scale the dry tolerance.
    pub fn max_height(&self) -> f64 {
        match self {
            InitialSpec::LakeAtRest { surface } => surface.abs(),
            InitialSpec::DamBreak { h_l, h_r, .. } => h_l.max(*h_r),
            InitialSpec::MovingFalseEquilibrium { h_l, z_l, z_r, .. } => h_l.max(h_l + z_l - z_r),
            InitialSpec::Table { h, .. } => h.iter().copied().fold(0.0, f64::max),
        }
    }
}
