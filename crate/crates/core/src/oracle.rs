//! Classical lattice-Boltzmann reference path and Markov-chain utilities.
//!
//! Nothing here touches complex arithmetic: the collision is the real matrix
//! `A` applied to molecular-chaos state probabilities, computed independently
//! of the density-matrix route in [`crate::node`].

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::lattice::{collide_and_stream, iterate, LatticeState, Snapshot, VelocityMap};
use crate::node::{ChannelOccupations, InducedStochasticMatrix};

/// Probability vector over the `2^b` basis states.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovDistribution(Vec<f64>);

impl MarkovDistribution {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::InvalidDistribution("empty distribution".into()));
        }
        if let Some((s, v)) = p.iter().enumerate().find(|(_, v)| !(**v >= 0.0 && v.is_finite())) {
            return Err(Error::InvalidDistribution(format!("p_{s} = {v}")));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidDistribution(format!("probabilities sum to {total}")));
        }
        Ok(MarkovDistribution(p))
    }

    pub fn uniform(dim: usize) -> Self {
        MarkovDistribution(vec![1.0 / dim as f64; dim])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    /// Shannon entropy in nats.
    pub fn entropy(&self) -> f64 {
        -self.0.iter().filter(|&&p| p > 0.0).map(|&p| p * p.ln()).sum::<f64>()
    }
}

/// `f -> marginals(A · n(f))` with `n` the product-form state probabilities.
pub fn lb_collide(f: &ChannelOccupations, a: &InducedStochasticMatrix) -> Result<ChannelOccupations> {
    let b = f.qubits();
    if a.qubits() != b {
        return Err(Error::DimensionMismatch(format!("{}-state collision matrix for {b} channels", a.dim())));
    }
    let dim = 1usize << b;
    // Appending channels in order makes channel 1 the most significant bit.
    let mut n = vec![1.0];
    for &fi in f.values() {
        let mut next = Vec::with_capacity(n.len() * 2);
        for &p in &n {
            next.push(p * (1.0 - fi));
            next.push(p * fi);
        }
        n = next;
    }
    debug_assert_eq!(n.len(), dim);

    let mut out = vec![0.0; b];
    for p in 0..dim {
        let np: f64 = a.row(p).iter().zip(&n).map(|(x, y)| x * y).sum();
        for (i, o) in out.iter_mut().enumerate() {
            if p & (1 << (b - 1 - i)) != 0 {
                *o += np;
            }
        }
    }
    for v in &mut out {
        if (-1e-10..0.0).contains(v) || (*v > 1.0 && *v <= 1.0 + 1e-10) {
            *v = v.clamp(0.0, 1.0);
        }
    }
    ChannelOccupations::new(out)
}

pub fn lb_step(
    state: &LatticeState,
    a: &InducedStochasticMatrix,
    vmap: &VelocityMap,
    exec: Execution,
) -> Result<LatticeState> {
    collide_and_stream(state, vmap, exec, |_, f| lb_collide(&ChannelOccupations::new(f.to_vec())?, a))
}

pub fn lb_run(
    initial: &LatticeState,
    a: &InducedStochasticMatrix,
    vmap: &VelocityMap,
    steps: u64,
    record_every: u64,
) -> Result<Vec<Snapshot>> {
    lb_run_with(initial, a, vmap, steps, record_every, Execution::default())
}

pub fn lb_run_with(
    initial: &LatticeState,
    a: &InducedStochasticMatrix,
    vmap: &VelocityMap,
    steps: u64,
    record_every: u64,
    exec: Execution,
) -> Result<Vec<Snapshot>> {
    iterate(initial, steps, record_every, |s, _| lb_step(s, a, vmap, exec))
}

/// Largest pointwise difference between two series and where it occurs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Deviation {
    pub max_abs: f64,
    pub time: u64,
    pub site: usize,
    pub channel: usize,
}

pub fn compare_runs(a: &[Snapshot], b: &[Snapshot]) -> Result<Deviation> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch(format!("{} vs {} snapshots", a.len(), b.len())));
    }
    let mut worst = Deviation { max_abs: 0.0, time: 0, site: 0, channel: 0 };
    for (sa, sb) in a.iter().zip(b) {
        let (x, y) = (&sa.state, &sb.state);
        if sa.time != sb.time || x.length() != y.length() || x.qubits() != y.qubits() {
            return Err(Error::DimensionMismatch(format!(
                "snapshot t={} ({}x{}) vs t={} ({}x{})",
                sa.time,
                x.length(),
                x.qubits(),
                sb.time,
                y.length(),
                y.qubits()
            )));
        }
        for (k, (u, v)) in x.values().iter().zip(y.values()).enumerate() {
            let d = (u - v).abs();
            if d > worst.max_abs {
                worst = Deviation { max_abs: d, time: sa.time, site: k / x.qubits(), channel: k % x.qubits() };
            }
        }
    }
    Ok(worst)
}

/// `A^t p0`, returning every intermediate distribution (`t = 0..=steps`).
pub fn markov_trajectory(
    a: &InducedStochasticMatrix,
    p0: &MarkovDistribution,
    steps: u64,
) -> Result<Vec<MarkovDistribution>> {
    if a.dim() != p0.0.len() {
        return Err(Error::DimensionMismatch(format!(
            "{}-state matrix for a {}-state distribution",
            a.dim(),
            p0.0.len()
        )));
    }
    let mut out = Vec::with_capacity(steps as usize + 1);
    out.push(p0.clone());
    let mut p = p0.0.clone();
    for _ in 0..steps {
        p = a.apply(&p)?;
        out.push(MarkovDistribution(p.clone()));
    }
    Ok(out)
}

pub fn markov_power_iterate(
    a: &InducedStochasticMatrix,
    p0: &MarkovDistribution,
    steps: u64,
) -> Result<MarkovDistribution> {
    if a.dim() != p0.0.len() {
        return Err(Error::DimensionMismatch(format!(
            "{}-state matrix for a {}-state distribution",
            a.dim(),
            p0.0.len()
        )));
    }
    let mut p = p0.0.clone();
    for _ in 0..steps {
        p = a.apply(&p)?;
    }
    Ok(MarkovDistribution(p))
}
