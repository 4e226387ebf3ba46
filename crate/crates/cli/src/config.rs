use std::path::Path;

use serde::{Deserialize, Serialize};
use svkin::{Boundary, SchemeParams};

use crate::error::{CliError, Result};
use crate::initial::InitialSpec;
use crate::topography::TopographySpec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub x_min: f64,
    pub x_max: f64,
    pub cells: usize,
    #[serde(default = "default_boundary")]
    pub boundary: Boundary,
}

fn default_boundary() -> Boundary {
    Boundary::Outflow
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeConfig {
    pub t_end: f64,
    #[serde(default = "default_beta")]
    pub beta: f64,
    #[serde(default = "default_g")]
    pub g: f64,
    /// Interval between CSV snapshots; only the initial and final states when absent.
    #[serde(default)]
    pub output_every: Option<f64>,
    #[serde(default = "default_max_steps")]
    pub max_steps: usize,
}

fn default_beta() -> f64 {
    0.9
}

fn default_g() -> f64 {
    9.81
}

fn default_max_steps() -> usize {
    10_000_000
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuditConfig {
    /// Audit every `every`-th step; 0 disables auditing.
    #[serde(default = "default_every")]
    pub every: usize,
    /// Include the `C (σ v_m)² g Δh²` term on the right-hand side.
    #[serde(default = "default_true")]
    pub error_term: bool,
    /// Dry tolerance relative to the reference height.
    #[serde(default = "default_h_dry")]
    pub h_dry: f64,
    #[serde(default = "default_quad_nodes")]
    pub quad_nodes: usize,
    #[serde(default = "default_quad_tol")]
    pub quad_tol: f64,
}

fn default_every() -> usize {
    1
}

fn default_true() -> bool {
    true
}

fn default_h_dry() -> f64 {
    1e-12
}

fn default_quad_nodes() -> usize {
    64
}

fn default_quad_tol() -> f64 {
    1e-9
}

impl Default for AuditConfig {
    fn default() -> Self {
        Self {
            every: default_every(),
            error_term: true,
            h_dry: default_h_dry(),
            quad_nodes: default_quad_nodes(),
            quad_tol: default_quad_tol(),
        }
    }
}

/// A complete run description, as read from a TOML file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub grid: GridConfig,
    #[serde(default)]
    pub topography: TopographySpec,
    pub initial: InitialSpec,
    pub time: TimeConfig,
    #[serde(default)]
    pub audit: AuditConfig,
}

impl Scenario {
    pub fn from_toml(text: &str) -> Result<Self> {
        Self::from_toml_with(text, &[])
    }

    /// Parses `text` and applies `section.key=value` overrides before validation.
    pub fn from_toml_with(text: &str, overrides: &[String]) -> Result<Self> {
        let err = |e: toml::de::Error| CliError::Config(e.to_string());
        let scenario: Scenario = if overrides.is_empty() {
            toml::from_str(text).map_err(err)?
        } else {
            let mut table: toml::Table = text.parse().map_err(err)?;
            for o in overrides {
                apply_override(&mut table, o)?;
            }
            table.try_into().map_err(err)?
        };
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn load(path: &Path, overrides: &[String]) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_toml_with(&text, overrides).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario serializes")
    }

    pub fn params(&self) -> Result<SchemeParams> {
        Ok(SchemeParams {
            g: self.time.g,
            beta: self.time.beta,
            h_dry: self.audit.h_dry * self.reference_height(),
            quad_nodes: self.audit.quad_nodes,
            quad_tol: self.audit.quad_tol,
        }
        .validated()?)
    }

    /// Largest initial height, or 1 m for an initially dry domain.
    pub fn reference_height(&self) -> f64 {
        let h = self.initial.max_height();
        if h > 0.0 {
            h
        } else {
            1.0
        }
    }

    /// Same scenario with `cells` cells.
    pub fn with_cells(&self, cells: usize) -> Self {
        let mut s = self.clone();
        s.grid.cells = cells;
        s
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |field: &str, msg: String| Err(CliError::Config(format!("{field}: {msg}")));
        if !(self.time.t_end > 0.0 && self.time.t_end.is_finite()) {
            return bad(
                "time.t_end",
                format!("must be positive, got {}", self.time.t_end),
            );
        }
        if self.grid.cells < 4 {
            return bad(
                "grid.cells",
                format!("need at least 4 cells, got {}", self.grid.cells),
            );
        }
        if !(self.grid.x_min < self.grid.x_max)
            || !self.grid.x_min.is_finite()
            || !self.grid.x_max.is_finite()
        {
            return bad(
                "grid",
                format!(
                    "x_min < x_max required, got [{}, {}]",
                    self.grid.x_min, self.grid.x_max
                ),
            );
        }
        if let Some(dt) = self.time.output_every {
            if !(dt > 0.0) {
                return bad("time.output_every", format!("must be positive, got {dt}"));
            }
        }
        if !(self.audit.h_dry > 0.0) {
            return bad(
                "audit.h_dry",
                format!("must be positive, got {}", self.audit.h_dry),
            );
        }
        self.topography.validate()?;
        self.initial.validate(&self.topography)?;
        self.params()?;
        Ok(())
    }
}

/// `section.key=value`, with `value` read as a TOML value and falling back to a string.
pub fn apply_override(table: &mut toml::Table, spec: &str) -> Result<()> {
    let (path, raw) = spec.split_once('=').ok_or_else(|| {
        CliError::Config(format!(
            "override `{spec}` is not of the form section.key=value"
        ))
    })?;
    let keys: Vec<&str> = path.trim().split('.').collect();
    if keys.iter().any(|k| k.is_empty()) {
        return Err(CliError::Config(format!(
            "override `{spec}` has an empty key"
        )));
    }
    let value = parse_value(raw.trim());
    let (last, parents) = keys.split_last().expect("split yields at least one key");
    let mut node = table;
    for k in parents {
        node = node
            .entry(k.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()))
            .as_table_mut()
            .ok_or_else(|| {
                CliError::Config(format!("override `{spec}`: `{k}` is not a section"))
            })?;
    }
    node.insert(last.to_string(), value);
    Ok(())
}

fn parse_value(raw: &str) -> toml::Value {
    let doc = format!("v = {raw}");
    match doc.parse::<toml::Table>() {
        Ok(mut t) => t.remove("v").expect("key v was just written"),
        Err(_) => toml::Value::String(raw.to_string()),
    }
}
