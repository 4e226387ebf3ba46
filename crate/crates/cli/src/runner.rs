use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use svkin::{
    cfl_timestep, constants_chain, macro_audit, step, ConservedState, Grid1D, SchemeParams,
};

use crate::config::Scenario;
use crate::error::{CliError, Result};
use crate::initial::InitialSpec;

pub const STATES_FILE: &str = "states.csv";
pub const AUDIT_FILE: &str = "audit.jsonl";
pub const SUMMARY_FILE: &str = "summary.json";

const CSV_HEADER: &str = "t (s),x (m),h (m),u (m/s),z (m)";

/// Grid and initial states of a scenario.
pub fn setup(scenario: &Scenario) -> Result<(Grid1D, Vec<ConservedState>, SchemeParams)> {
    let params = scenario.params()?;
    let topo = scenario
        .initial
        .topography_override()
        .unwrap_or_else(|| scenario.topography.clone());
    let g = &scenario.grid;
    let grid = Grid1D::uniform(g.x_min, g.x_max, g.cells, g.boundary, |x| topo.eval(x))?;
    let states = grid
        .centers()
        .iter()
        .zip(grid.topography())
        .map(|(&x, &z)| scenario.initial.state(x, z).regularized(params.h_dry))
        .collect();
    Ok((grid, states, params))
}

/// One line of the audit log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditRecord {
    pub step: usize,
    pub t: f64,
    pub dt: f64,
    pub violations: usize,
    pub flagged_cells: Vec<usize>,
    pub max_d: f64,
    /// `Σ Δx_i max(D_i, 0)` for this step.
    pub positive_dissipation: f64,
    pub empirical_constant: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub name: String,
    pub cells: usize,
    pub steps: usize,
    pub final_time: f64,
    pub initial_mass: f64,
    pub final_mass: f64,
    /// Net mass that entered through the boundaries.
    pub boundary_inflow: f64,
    /// `|final − initial − inflow| / initial`.
    pub mass_residual: f64,
    pub min_h: f64,
    /// Largest `D_i^n` over all audited steps and cells.
    pub max_positive_d: f64,
    /// `Σ_n Σ_i Δx_i max(D_i^n, 0)` over audited steps.
    pub integrated_violation: f64,
    pub audited_steps: usize,
    pub violations: usize,
    pub error_term: bool,
    pub c_macro: f64,
    /// Largest observed `D / ((σ v_m)² g Δh²)`, to compare with `c_macro`.
    pub empirical_constant: f64,
    /// `max |h + z − C|` over wet cells, for a lake at rest.
    pub max_surface_deviation: Option<f64>,
}

impl RunSummary {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub summary: RunSummary,
    pub grid: Grid1D,
    pub states: Vec<ConservedState>,
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub out_dir: Option<PathBuf>,
    /// Overrides `audit.every`.
    pub audit_every: Option<usize>,
}

struct Sinks {
    states: BufWriter<File>,
    audit: BufWriter<File>,
    dir: PathBuf,
}

impl Sinks {
    fn create(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        let open = |name: &str| -> Result<BufWriter<File>> {
            let p = dir.join(name);
            Ok(BufWriter::new(
                File::create(&p).map_err(|e| CliError::io(&p, e))?,
            ))
        };
        let mut states = open(STATES_FILE)?;
        writeln!(states, "{CSV_HEADER}").map_err(|e| CliError::io(&dir.join(STATES_FILE), e))?;
        Ok(Self {
            states,
            audit: open(AUDIT_FILE)?,
            dir: dir.to_path_buf(),
        })
    }

    fn snapshot(
        &mut self,
        t: f64,
        grid: &Grid1D,
        states: &[ConservedState],
        params: &SchemeParams,
    ) -> Result<()> {
        let path = self.dir.join(STATES_FILE);
        for ((x, z), s) in grid.centers().iter().zip(grid.topography()).zip(states) {
            writeln!(self.states, "{t},{x},{},{},{z}", s.h, params.velocity(s))
                .map_err(|e| CliError::io(&path, e))?;
        }
        Ok(())
    }

    fn audit(&mut self, record: &AuditRecord) -> Result<()> {
        let path = self.dir.join(AUDIT_FILE);
        serde_json::to_writer(&mut self.audit, record)?;
        writeln!(self.audit).map_err(|e| CliError::io(&path, e))
    }

    fn finish(mut self, summary: &RunSummary) -> Result<()> {
        self.states
            .flush()
            .map_err(|e| CliError::io(&self.dir.join(STATES_FILE), e))?;
        self.audit
            .flush()
            .map_err(|e| CliError::io(&self.dir.join(AUDIT_FILE), e))?;
        let path = self.dir.join(SUMMARY_FILE);
        let mut text = serde_json::to_string_pretty(summary)?;
        text.push('\n');
        std::fs::write(&path, text).map_err(|e| CliError::io(&path, e))
    }
}

fn neumaier_sum(values: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut c) = (0.0f64, 0.0f64);
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            c += (sum - t) + v;
        } else {
            c += (v - t) + sum;
        }
        sum = t;
    }
    sum + c
}

fn mass(states: &[ConservedState], grid: &Grid1D) -> f64 {
    neumaier_sum(states.iter().zip(grid.widths()).map(|(s, dx)| s.h * dx))
}

/// Runs `scenario` to its end time, auditing the entropy inequality along the way.
pub fn run(scenario: &Scenario, options: &RunOptions) -> Result<RunOutput> {
    let (grid, mut states, params) = setup(scenario)?;
    let chain = constants_chain(params.beta)?;
    let every = options.audit_every.unwrap_or(scenario.audit.every);
    let error_term = scenario.audit.error_term;
    let t_end = scenario.time.t_end;
    let mut sinks = options.out_dir.as_deref().map(Sinks::create).transpose()?;

    let initial_mass = mass(&states, &grid);
    let mut inflow = Vec::new();
    let mut min_h = states.iter().map(|s| s.h).fold(f64::INFINITY, f64::min);
    let mut t = 0.0;
    let mut n = 0;
    let mut next_output = scenario.time.output_every.unwrap_or(t_end).min(t_end);
    let mut outputs = 1usize;
    let (mut max_d, mut integrated, mut audited, mut violations, mut empirical) =
        (f64::NEG_INFINITY, 0.0, 0, 0, 0.0f64);
    if let Some(s) = sinks.as_mut() {
        s.snapshot(t, &grid, &states, &params)?;
    }

    while t < t_end {
        if n >= scenario.time.max_steps {
            return Err(CliError::Study(format!(
                "{}: reached max_steps = {} at t = {t}",
                scenario.name, scenario.time.max_steps
            )));
        }
        let dt_cfl = cfl_timestep(&states, &grid, &params)?;
        let hits_output = dt_cfl >= next_output - t;
        let dt = if hits_output { next_output - t } else { dt_cfl };
        let (next, report) = step(&states, &grid, &params, dt)?;
        n += 1;
        inflow.push(report.boundary_mass_inflow());

        if every > 0 && n % every == 0 {
            let mut audit = macro_audit(&report, &states, &next, &grid, &chain, &params)?;
            audit.step = n;
            audit.time = t + dt;
            let flagged: Vec<usize> = (0..grid.len())
                .filter(|&i| {
                    audit.reconstruction_flags[i]
                        || if error_term {
                            audit.flags[i]
                        } else {
                            audit.d[i] > audit.tolerance
                        }
                })
                .collect();
            audited += 1;
            violations += flagged.len();
            max_d = max_d.max(audit.max_d);
            integrated += audit.positive_dissipation;
            empirical = empirical.max(audit.empirical_constant);
            if let Some(s) = sinks.as_mut() {
                s.audit(&AuditRecord {
                    step: n,
                    t: audit.time,
                    dt,
                    violations: flagged.len(),
                    flagged_cells: flagged,
                    max_d: audit.max_d,
                    positive_dissipation: audit.positive_dissipation,
                    empirical_constant: audit.empirical_constant,
                    tolerance: audit.tolerance,
                })?;
            }
        }

        states = next;
        min_h = states.iter().map(|s| s.h).fold(min_h, f64::min);
        if hits_output {
            t = next_output;
            if let Some(s) = sinks.as_mut() {
                s.snapshot(t, &grid, &states, &params)?;
            }
            outputs += 1;
            next_output = match scenario.time.output_every {
                Some(every) => (outputs as f64 * every).min(t_end),
                None => t_end,
            };
        } else {
            t += dt;
        }
    }

    let final_mass = mass(&states, &grid);
    let boundary_inflow = neumaier_sum(inflow.into_iter());
    let summary = RunSummary {
        name: scenario.name.clone(),
        cells: grid.len(),
        steps: n,
        final_time: t,
        initial_mass,
        final_mass,
        boundary_inflow,
        mass_residual: (final_mass - initial_mass - boundary_inflow).abs()
            / initial_mass.max(f64::MIN_POSITIVE),
        min_h,
        max_positive_d: max_d.max(0.0),
        integrated_violation: integrated,
        audited_steps: audited,
        violations,
        error_term,
        c_macro: chain.c_macro,
        empirical_constant: empirical,
        max_surface_deviation: match scenario.initial {
            InitialSpec::LakeAtRest { surface } => Some(
                states
                    .iter()
                    .zip(grid.topography())
                    .filter(|(s, _)| s.h > params.h_dry)
                    .map(|(s, z)| (s.h + z - surface).abs())
                    .fold(0.0, f64::max),
            ),
            _ => None,
        },
    };
    if let Some(s) = sinks {
        s.finish(&summary)?;
    }
    Ok(RunOutput {
        summary,
        grid,
        states,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scenario(extra: &str) -> Scenario {
        let text = format!(
            r#"
name = "t"
[grid]
x_min = 0.0
x_max = 1.0
cells = 40
[initial]
kind = "dam_break"
h_l = 1.0
h_r = 0.5
x_jump = 0.5
[time]
t_end = 0.05
{extra}
"#
        );
        Scenario::from_toml(&text).unwrap()
    }

    #[test]
    fn hits_end_and_output_times_exactly() {
        let dir = tempfile::tempdir().unwrap();
        let s = scenario("output_every = 0.02");
        let out = run(
            &s,
            &RunOptions {
                out_dir: Some(dir.path().to_path_buf()),
                audit_every: None,
            },
        )
        .unwrap();
        assert_eq!(out.summary.final_time, 0.05);
        let csv = std::fs::read_to_string(dir.path().join(STATES_FILE)).unwrap();
        let mut times: Vec<&str> = csv
            .lines()
            .skip(1)
            .map(|l| l.split(',').next().unwrap())
            .collect();
        times.dedup();
        assert_eq!(times, ["0", "0.02", "0.04", "0.05"]);
        assert_eq!(csv.lines().count(), 1 + 4 * 40);
        let audits = std::fs::read_to_string(dir.path().join(AUDIT_FILE)).unwrap();
        assert_eq!(audits.lines().count(), out.summary.steps);
        assert!(out.summary.passed());
    }

    #[test]
    fn audit_cadence() {
        let s = scenario("");
        let all = run(&s, &RunOptions::default()).unwrap().summary;
        let some = run(
            &s,
            &RunOptions {
                out_dir: None,
                audit_every: Some(3),
            },
        )
        .unwrap()
        .summary;
        assert_eq!(some.audited_steps, all.steps / 3);
        let none = run(
            &s,
            &RunOptions {
                out_dir: None,
                audit_every: Some(0),
            },
        )
        .unwrap()
        .summary;
        assert_eq!(none.audited_steps, 0);
    }
}
