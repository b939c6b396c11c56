//! Diffusion coefficient from the growth of the profile variance.

use qlgas::lattice::{density_profile, profile_moments};
use qlgas::Snapshot;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffusionFit {
    /// `slope / 2`, from `Var(t) = 2 D t`.
    pub d: f64,
    pub slope: f64,
    pub slope_stderr: f64,
    pub points: usize,
}

/// Density profiles `rho(x)` keyed by time.
pub fn density_series(series: &[Snapshot]) -> Vec<(u64, Vec<f64>)> {
    series.iter().map(|s| (s.time, density_profile(&s.state))).collect()
}

/// Least-squares slope of the profile variance over `t_min <= t <= t_max`.
///
/// Profiles must not wrap around the periodic boundary inside the window.
pub fn fit_diffusion_coefficient(series: &[(u64, Vec<f64>)], t_min: u64, t_max: u64) -> Result<DiffusionFit> {
    if t_max <= t_min {
        return Err(CliError::Input(format!("empty fit window [{t_min}, {t_max}]")));
    }
    let mut pts = Vec::new();
    for (t, profile) in series.iter().filter(|(t, _)| (t_min..=t_max).contains(t)) {
        pts.push((*t as f64, profile_moments(profile)?.variance));
    }
    let n = pts.len();
    if n < 3 {
        return Err(CliError::Input(format!("fit window [{t_min}, {t_max}] holds {n} points, need at least 3")));
    }
    let nf = n as f64;
    let tbar = pts.iter().map(|p| p.0).sum::<f64>() / nf;
    let vbar = pts.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = pts.iter().map(|p| (p.0 - tbar).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - tbar) * (p.1 - vbar)).sum();
    let slope = sxy / sxx;
    let intercept = vbar - slope * tbar;
    let ssr: f64 = pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let slope_stderr = (ssr / (nf - 2.0) / sxx).sqrt();
    Ok(DiffusionFit { d: slope / 2.0, slope, slope_stderr, points: n })
}
