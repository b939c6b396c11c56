//! Finite-ensemble measurement: replaces the exact diagonal readout with `M`
//! simulated projective measurements per node.

use std::fmt;

use crate::error::{Error, Result};
use crate::node::{is_occupied, ChannelOccupations, DensityMatrix};
use crate::stream::{KeyedStream, StreamKey};

const VALIDATION_EPS: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnsembleConfig {
    members: u64,
    seed: u64,
}

impl EnsembleConfig {
    pub fn new(members: u64, seed: u64) -> Result<Self> {
        if members == 0 {
            return Err(Error::InvalidInput("ensemble needs at least one member".into()));
        }
        Ok(EnsembleConfig { members, seed })
    }

    pub fn members(&self) -> u64 {
        self.members
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Histogram of measured basis states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasurementCounts {
    qubits: usize,
    counts: Vec<u64>,
}

impl MeasurementCounts {
    pub fn new(counts: Vec<u64>) -> Result<Self> {
        let dim = counts.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(dim));
        }
        if counts.iter().all(|&c| c == 0) {
            return Err(Error::InvalidInput("no measurements recorded".into()));
        }
        Ok(MeasurementCounts { qubits: dim.trailing_zeros() as usize, counts })
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }
}

/// Frequency estimate of the channel occupations and its binomial standard
/// error, `sqrt(f(1 - f) / M)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OccupationEstimate {
    pub f_hat: ChannelOccupations,
    pub std_err: Vec<f64>,
}

/// Draws `M` basis states from the diagonal of `rho` by inverse CDF in index
/// order, using the stream keyed by `(cfg.seed, key.site, key.time)`.
pub fn sample_measurements(rho: &DensityMatrix, cfg: &EnsembleConfig, key: StreamKey) -> Result<MeasurementCounts> {
    let pops = rho.populations();
    if let Some((s, p)) = pops.iter().enumerate().find(|(_, p)| **p < -VALIDATION_EPS) {
        return Err(Error::InvalidDensity(format!("negative population {p:.3e} in state {s}")));
    }
    let total: f64 = pops.iter().sum();
    if (total - 1.0).abs() > VALIDATION_EPS {
        return Err(Error::InvalidDensity(format!("trace deviates from one: {total}")));
    }

    let mut counts = vec![0u64; pops.len()];
    let mut cdf = Vec::with_capacity(pops.len());
    let mut acc = 0.0;
    for &p in &pops {
        acc += p.max(0.0);
        cdf.push(acc);
    }
    let last_possible = pops.iter().rposition(|&p| p > 0.0).unwrap_or(pops.len() - 1);

    // A point mass is what the inverse CDF would return for every draw.
    if pops.iter().filter(|&&p| p > 0.0).count() == 1 {
        counts[last_possible] = cfg.members;
        return MeasurementCounts::new(counts);
    }

    let mut stream = KeyedStream::new(cfg.seed, key);
    for _ in 0..cfg.members {
        let u = stream.next_f64() * acc;
        let s = cdf.iter().position(|&c| u < c).unwrap_or(last_possible);
        counts[s] += 1;
    }
    MeasurementCounts::new(counts)
}

pub fn estimate_f(counts: &MeasurementCounts) -> Result<OccupationEstimate> {
    let m = counts.total();
    if m == 0 {
        return Err(Error::InvalidInput("no measurements recorded".into()));
    }
    let b = counts.qubits;
    let mf = m as f64;
    let f: Vec<f64> = (0..b)
        .map(|i| {
            let hits: u64 =
                counts.counts.iter().enumerate().filter(|(s, _)| is_occupied(*s, i, b)).map(|(_, c)| c).sum();
            hits as f64 / mf
        })
        .collect();
    let std_err = f.iter().map(|&p| (p * (1.0 - p) / mf).sqrt()).collect();
    Ok(OccupationEstimate { f_hat: ChannelOccupations::new(f)?, std_err })
}

/// `2^b`, kept symbolic so that any `b` can be reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StateCount {
    pub qubits: u32,
}

impl StateCount {
    pub fn to_u128(self) -> Option<u128> {
        1u128.checked_shl(self.qubits)
    }
}

impl fmt::Display for StateCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_u128() {
            Some(n) => write!(f, "2^{} = {}", self.qubits, n),
            None => write!(f, "2^{}", self.qubits),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Capacity {
    pub feasible: bool,
    pub states: StateCount,
}

/// Whether `members` molecules suffice to read out every one of the `2^b`
/// basis-state probabilities, i.e. `M >= 2^b`.
///
/// The literal inequality is used: `10^18` members do not cover `2^60`
/// states (`2^60 ≈ 1.153e18`), so that commonly quoted figure is only an
/// order-of-magnitude bound.
pub fn capacity_check(qubits: u32, members: u64) -> Capacity {
    let states = StateCount { qubits };
    let feasible = states.to_u128().is_some_and(|n| u128::from(members) >= n);
    Capacity { feasible, states }
}
