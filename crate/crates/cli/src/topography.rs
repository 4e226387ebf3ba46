use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// Bottom elevation `z(x)` [m], sampled at cell centers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TopographySpec {
    Flat {
        #[serde(default)]
        level: f64,
    },
    /// `height · exp(−((x − center)/width)²)`.
    Bump {
        center: f64,
        height: f64,
        width: f64,
    },
    Linear {
        slope: f64,
        #[serde(default)]
        offset: f64,
    },
    /// Piecewise linear through `(x, z)`, constant beyond the ends.
    /// A repeated abscissa is a jump: left value from the first copy, right value from the second.
    Table { x: Vec<f64>, z: Vec<f64> },
}

impl Default for TopographySpec {
    fn default() -> Self {
        TopographySpec::Flat { level: 0.0 }
    }
}

impl TopographySpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            TopographySpec::Bump { width, .. } if !(*width > 0.0) => Err(CliError::Config(
                format!("topography.width: must be positive, got {width}"),
            )),
            TopographySpec::Table { x, z } => validate_table("topography", x, &[("z", z)]),
            _ => Ok(()),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            TopographySpec::Flat { level } => *level,
            TopographySpec::Bump {
                center,
                height,
                width,
            } => {
                let s = (x - center) / width;
                height * (-s * s).exp()
            }
            TopographySpec::Linear { slope, offset } => offset + slope * x,
            TopographySpec::Table { x: xs, z } => interpolate(xs, z, x),
        }
    }

    /// False for tables with jumps.
    pub fn is_lipschitz(&self) -> bool {
        match self {
            TopographySpec::Table { x, .. } => x.windows(2).all(|w| w[0] < w[1]),
            _ => true,
        }
    }

    pub fn is_flat(&self) -> bool {
        match self {
            TopographySpec::Flat { .. } => true,
            TopographySpec::Linear { slope, .. } => *slope == 0.0,
            TopographySpec::Bump { height, .. } => *height == 0.0,
            TopographySpec::Table { z, .. } => z.windows(2).all(|w| w[0] == w[1]),
        }
    }
}

pub(crate) fn validate_table(
    section: &str,
    x: &[f64],
    columns: &[(&str, &Vec<f64>)],
) -> Result<()> {
    if x.is_empty() {
        return Err(CliError::Config(format!("{section}.x: table is empty")));
    }
    for (name, col) in columns {
        if col.len() != x.len() {
            return Err(CliError::Config(format!(
                "{section}.{name}: expected {} values to match x, got {}",
                x.len(),
                col.len()
            )));
        }
        if col.iter().any(|v| !v.is_finite()) {
            return Err(CliError::Config(format!(
                "{section}.{name}: values must be finite"
            )));
        }
    }
    if x.iter().any(|v| !v.is_finite()) || x.windows(2).any(|w| w[1] < w[0]) {
        return Err(CliError::Config(format!(
            "{section}.x: abscissae must be finite and nondecreasing"
        )));
    }
    if x.windows(3).any(|w| w[0] == w[2]) {
        return Err(CliError::Config(format!(
            "{section}.x: an abscissa may appear at most twice"
        )));
    }
    Ok(())
}

/// Piecewise-linear interpolation with constant extension; at a repeated abscissa the
/// right-hand value wins for `x` at the jump.
pub(crate) fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let n = xs.len();
    if x < xs[0] {
        return ys[0];
    }
    if x >= xs[n - 1] {
        return ys[n - 1];
    }
    let k = xs.partition_point(|&v| v <= x);
    let (x0, x1, y0, y1) = (xs[k - 1], xs[k], ys[k - 1], ys[k]);
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}
