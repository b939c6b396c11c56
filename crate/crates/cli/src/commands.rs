//! Subcommand bodies. Each returns its report as text so the binary stays a
//! thin shell around them.

use std::fmt::Write as _;
use std::path::Path;

use qlgas::complexlin::unitarity_residual;
use qlgas::node::{check_collision_constraint, induced_stochastic};
use qlgas::oracle::{compare_runs, lb_run, markov_trajectory, Deviation, MarkovDistribution};
use qlgas::{lattice, Snapshot, Tolerance, UnitaryOperator};

use crate::config::{Engine, SimulationConfig};
use crate::error::{CliError, Result};
use crate::fit::{density_series, fit_diffusion_coefficient, DiffusionFit};

/// Runs the configured engine and returns the recorded series.
pub fn simulate(cfg: &SimulationConfig) -> Result<Vec<Snapshot>> {
    let u = cfg.unitary.load()?;
    let b = u.qubits();
    let init = cfg.initial_state(b)?;
    let vmap = cfg.velocity_map(b)?;
    Ok(match cfg.engine {
        Engine::Quantum => lattice::run(&init, &u, &vmap, cfg.collision_mode()?, cfg.steps, cfg.record_every)?,
        Engine::Classical => lb_run(&init, &induced_stochastic(&u), &vmap, cfg.steps, cfg.record_every)?,
    })
}

/// Runs the quantum path in the configured mode against the classical
/// oracle and returns the largest pointwise deviation.
pub fn compare(cfg: &SimulationConfig) -> Result<Deviation> {
    let u = cfg.unitary.load()?;
    let b = u.qubits();
    let init = cfg.initial_state(b)?;
    let vmap = cfg.velocity_map(b)?;
    let quantum = lattice::run(&init, &u, &vmap, cfg.collision_mode()?, cfg.steps, cfg.record_every)?;
    let classical = lb_run(&init, &induced_stochastic(&u), &vmap, cfg.steps, cfg.record_every)?;
    Ok(compare_runs(&quantum, &classical)?)
}

pub fn format_deviation(d: &Deviation) -> String {
    format!("max_deviation {:.3e} at t={} x={} channel={}\n", d.max_abs, d.time, d.site, d.channel + 1)
}

pub fn check_report(u: &UnitaryOperator) -> String {
    let report = check_collision_constraint(u, Tolerance::DEFAULT);
    let (residual, row, col) = unitarity_residual(u.matrix()).expect("unitary is square");
    let mut out = format!(
        "{}, max_violation {:.1e}\n",
        if report.satisfied { "satisfied" } else { "violated" },
        report.max_violation
    );
    for v in &report.violations {
        writeln!(out, "  row {} columns ({}, {}): Re[U_pm conj(U_pr)] = {:.6e}", v.p, v.m, v.r, v.value).unwrap();
    }
    writeln!(out, "unitarity_residual {residual:.1e} at ({row}, {col})").unwrap();
    out
}

pub fn induce_report(u: &UnitaryOperator) -> String {
    let a = induced_stochastic(u);
    let mut out = String::new();
    for (p, sum) in a.row_sums().iter().enumerate() {
        let row: Vec<String> = a.row(p).iter().map(|v| format!("{v:.6}")).collect();
        writeln!(out, "{} | {sum:.6}", row.join(" ")).unwrap();
    }
    let cols: Vec<String> = a.column_sums().iter().map(|v| format!("{v:.6}")).collect();
    writeln!(out, "{}", cols.join(" ")).unwrap();
    out
}

/// Whitespace- or comma-separated probabilities; `#` starts a comment line.
pub fn parse_distribution(text: &str) -> Result<MarkovDistribution> {
    let values = text
        .lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .flat_map(|l| l.split(|c: char| c == ',' || c.is_whitespace()))
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|_| CliError::Input(format!("bad probability `{t}`"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(MarkovDistribution::new(values)?)
}

/// CSV `t,p_0,...,p_{N-1},entropy` for `t = 0..=steps`.
pub fn markov_report(u: &UnitaryOperator, p0: &MarkovDistribution, steps: u64) -> Result<String> {
    let traj = markov_trajectory(&induced_stochastic(u), p0, steps)?;
    let mut out = String::from("t");
    for s in 0..p0.values().len() {
        write!(out, ",p_{s}").unwrap();
    }
    out.push_str(",entropy\n");
    for (t, p) in traj.iter().enumerate() {
        write!(out, "{t}").unwrap();
        for v in p.values() {
            write!(out, ",{v:?}").unwrap();
        }
        writeln!(out, ",{:?}", p.entropy()).unwrap();
    }
    Ok(out)
}

pub fn fit_file(path: &Path, t_min: u64, t_max: u64) -> Result<DiffusionFit> {
    let file = std::fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    let series = crate::series::read_series(std::io::BufReader::new(file))?;
    fit_diffusion_coefficient(&density_series(&series), t_min, t_max)
}

pub fn format_fit(f: &DiffusionFit) -> String {
    format!("D {:.9} slope {:.9} slope_stderr {:.3e} points {}\n", f.d, f.slope, f.slope_stderr, f.points)
}
