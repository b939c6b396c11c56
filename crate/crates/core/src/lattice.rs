//! One-dimensional periodic lattice of nodes: collide every site, then stream
//! each channel by its integer displacement.

use std::f64::consts::TAU;

use crate::ensemble::{estimate_f, sample_measurements, EnsembleConfig};
use crate::error::{Error, Result};
use crate::exec::{for_each_site, Execution};
use crate::node::{
    collide, density_from_pure, encode_mixed, encode_pure, readout, ChannelOccupations, UnitaryOperator, MAX_QUBITS,
};
use crate::stream::StreamKey;

/// Per-channel displacement, in sites per step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VelocityMap(Vec<i64>);

impl VelocityMap {
    pub fn new(displacements: Vec<i64>) -> Result<Self> {
        if displacements.is_empty() {
            return Err(Error::InvalidInput("velocity map is empty".into()));
        }
        Ok(VelocityMap(displacements))
    }

    /// Channel 1 moves right, channel 2 moves left.
    pub fn two_channel() -> Self {
        VelocityMap(vec![1, -1])
    }

    pub fn displacements(&self) -> &[i64] {
        &self.0
    }

    fn check_against(&self, state: &LatticeState) -> Result<()> {
        if self.0.len() != state.qubits {
            return Err(Error::DimensionMismatch(format!(
                "{} displacements for {} channels",
                self.0.len(),
                state.qubits
            )));
        }
        if let Some(d) = self.0.iter().find(|d| d.unsigned_abs() > state.length as u64) {
            return Err(Error::InvalidInput(format!("displacement {d} exceeds lattice length {}", state.length)));
        }
        Ok(())
    }
}

/// Occupations `f_i(x)` for every site, stored site-major.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeState {
    length: usize,
    qubits: usize,
    f: Vec<f64>,
}

impl LatticeState {
    pub fn new(length: usize, qubits: usize, f: Vec<f64>) -> Result<Self> {
        if length == 0 {
            return Err(Error::InvalidInput("lattice length must be positive".into()));
        }
        if qubits == 0 || qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits(qubits));
        }
        if f.len() != length * qubits {
            return Err(Error::DimensionMismatch(format!("{} values for {length} sites x {qubits} channels", f.len())));
        }
        if let Some(k) = f.iter().position(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::OccupationOutOfRange { channel: k % qubits, value: f[k] }.at_site(k / qubits));
        }
        Ok(LatticeState { length, qubits, f })
    }

    pub fn zeros(length: usize, qubits: usize) -> Result<Self> {
        Self::new(length, qubits, vec![0.0; length * qubits])
    }

    pub fn uniform(length: usize, values: &[f64]) -> Result<Self> {
        Self::new(length, values.len(), values.repeat(length))
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn values(&self) -> &[f64] {
        &self.f
    }

    pub fn site(&self, x: usize) -> &[f64] {
        &self.f[x * self.qubits..(x + 1) * self.qubits]
    }

    pub fn set_site(&mut self, x: usize, values: &[f64]) -> Result<()> {
        let occ = ChannelOccupations::new(values.to_vec())?;
        if occ.qubits() != self.qubits || x >= self.length {
            return Err(Error::DimensionMismatch(format!(
                "site {x} with {} channels on a {}x{} lattice",
                occ.qubits(),
                self.length,
                self.qubits
            )));
        }
        self.f[x * self.qubits..(x + 1) * self.qubits].copy_from_slice(values);
        Ok(())
    }

    /// `sum_{x,i} f_i(x)`, with compensated (Neumaier) summation.
    pub fn total_mass(&self) -> f64 {
        let (mut sum, mut comp) = (0.0f64, 0.0f64);
        for &v in &self.f {
            let t = sum + v;
            comp += if sum.abs() >= v.abs() { (sum - t) + v } else { (v - t) + sum };
            sum = t;
        }
        sum + comp
    }

    /// Periodic translation by `k` sites.
    pub fn shifted(&self, k: i64) -> Self {
        let l = self.length as i64;
        let mut f = vec![0.0; self.f.len()];
        for x in 0..self.length {
            let to = (x as i64 + k).rem_euclid(l) as usize;
            f[to * self.qubits..(to + 1) * self.qubits].copy_from_slice(self.site(x));
        }
        LatticeState { f, ..*self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CollisionMode {
    /// Product pure state per node, exact readout.
    Pure,
    /// Diagonal (incoherent) state per node, exact readout.
    Mixed,
    /// Pure state per node, readout estimated from a finite ensemble.
    Ensemble(EnsembleConfig),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub time: u64,
    pub state: LatticeState,
}

/// `f_i(x) <- f_i((x - d_i) mod L)`.
pub fn stream(state: &LatticeState, vmap: &VelocityMap) -> Result<LatticeState> {
    vmap.check_against(state)?;
    let mut out = vec![0.0; state.f.len()];
    stream_into(state.length, state.qubits, &state.f, vmap, &mut out);
    Ok(LatticeState { f: out, ..*state })
}

fn stream_into(length: usize, qubits: usize, src: &[f64], vmap: &VelocityMap, dst: &mut [f64]) {
    let l = length as i64;
    for (i, &d) in vmap.0.iter().enumerate() {
        let shift = d.rem_euclid(l) as usize;
        for x in 0..length {
            let from = (x + length - shift) % length;
            dst[x * qubits + i] = src[from * qubits + i];
        }
    }
}

fn collide_site(f: &[f64], u: &UnitaryOperator, mode: &CollisionMode, key: StreamKey) -> Result<ChannelOccupations> {
    let occ = ChannelOccupations::new(f.to_vec())?;
    match mode {
        CollisionMode::Pure => readout(&collide(&density_from_pure(&encode_pure(&occ)), u)?),
        CollisionMode::Mixed => readout(&collide(&encode_mixed(&occ), u)?),
        CollisionMode::Ensemble(cfg) => {
            let rho = collide(&density_from_pure(&encode_pure(&occ)), u)?;
            Ok(estimate_f(&sample_measurements(&rho, cfg, key)?)?.f_hat)
        }
    }
}

/// Applies a per-site map to every node and streams the result.
pub(crate) fn collide_and_stream<F>(
    state: &LatticeState,
    vmap: &VelocityMap,
    exec: Execution,
    site_map: F,
) -> Result<LatticeState>
where
    F: Fn(usize, &[f64]) -> Result<ChannelOccupations> + Sync + Send,
{
    vmap.check_against(state)?;
    let b = state.qubits;
    let mut post = vec![0.0; state.f.len()];
    for_each_site(exec, &mut post, b, |x, out| {
        let next = site_map(x, &state.f[x * b..(x + 1) * b])?;
        out.copy_from_slice(next.values());
        Ok(())
    })?;
    let mut f = vec![0.0; post.len()];
    stream_into(state.length, b, &post, vmap, &mut f);
    Ok(LatticeState { f, ..*state })
}

/// One collide-then-stream update. `time` keys the ensemble random streams
/// and is ignored by the exact modes.
pub fn step(
    state: &LatticeState,
    u: &UnitaryOperator,
    vmap: &VelocityMap,
    mode: CollisionMode,
    time: u64,
) -> Result<LatticeState> {
    step_with(state, u, vmap, mode, time, Execution::default())
}

pub fn step_with(
    state: &LatticeState,
    u: &UnitaryOperator,
    vmap: &VelocityMap,
    mode: CollisionMode,
    time: u64,
    exec: Execution,
) -> Result<LatticeState> {
    if u.qubits() != state.qubits {
        return Err(Error::DimensionMismatch(format!(
            "{}-qubit unitary on a {}-channel lattice",
            u.qubits(),
            state.qubits
        )));
    }
    collide_and_stream(state, vmap, exec, |x, f| collide_site(f, u, &mode, StreamKey::new(x as u64, time)))
}

/// Iterates [`step`] and records the state at `t = 0` and every
/// `record_every` steps thereafter.
pub fn run(
    initial: &LatticeState,
    u: &UnitaryOperator,
    vmap: &VelocityMap,
    mode: CollisionMode,
    steps: u64,
    record_every: u64,
) -> Result<Vec<Snapshot>> {
    run_with(initial, u, vmap, mode, steps, record_every, Execution::default())
}

pub fn run_with(
    initial: &LatticeState,
    u: &UnitaryOperator,
    vmap: &VelocityMap,
    mode: CollisionMode,
    steps: u64,
    record_every: u64,
    exec: Execution,
) -> Result<Vec<Snapshot>> {
    iterate(initial, steps, record_every, |s, t| step_with(s, u, vmap, mode, t, exec))
}

pub(crate) fn iterate<F>(initial: &LatticeState, steps: u64, record_every: u64, mut advance: F) -> Result<Vec<Snapshot>>
where
    F: FnMut(&LatticeState, u64) -> Result<LatticeState>,
{
    if record_every == 0 {
        return Err(Error::InvalidInput("record_every must be positive".into()));
    }
    let mut series = vec![Snapshot { time: 0, state: initial.clone() }];
    let mut current = initial.clone();
    for t in 0..steps {
        current = advance(&current, t).map_err(|e| e.at_step(t))?;
        if (t + 1) % record_every == 0 {
            series.push(Snapshot { time: t + 1, state: current.clone() });
        }
    }
    Ok(series)
}

/// `rho(x) = sum_i f_i(x)`.
pub fn density_profile(state: &LatticeState) -> Vec<f64> {
    state.f.chunks(state.qubits).map(|c| c.iter().sum()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileMoments {
    pub mass: f64,
    /// Weighted mean site index, reduced into `[0, L)`.
    pub mean: f64,
    pub variance: f64,
}

/// Mass, mean and variance of a periodic profile.
///
/// Site coordinates are unwrapped to the periodic image nearest the
/// circular mean before the moments are taken, so a compact profile that
/// straddles the origin is measured correctly.
pub fn profile_moments(profile: &[f64]) -> Result<ProfileMoments> {
    let l = profile.len();
    let mass: f64 = profile.iter().sum();
    if l == 0 || mass <= 0.0 || !mass.is_finite() {
        return Err(Error::InvalidInput(format!("profile has no positive mass ({mass})")));
    }
    let lf = l as f64;
    let (s, c) = profile.iter().enumerate().fold((0.0, 0.0), |(s, c), (x, &w)| {
        let th = TAU * x as f64 / lf;
        (s + w * th.sin(), c + w * th.cos())
    });
    let center = (s.atan2(c) / TAU * lf).rem_euclid(lf);

    let unwrapped = |x: usize| -> f64 {
        let x = x as f64;
        let k = ((center - x) / lf).round();
        x + k * lf
    };
    let mean = profile.iter().enumerate().map(|(x, &w)| w * unwrapped(x)).sum::<f64>() / mass;
    let variance = profile.iter().enumerate().map(|(x, &w)| w * (unwrapped(x) - mean).powi(2)).sum::<f64>() / mass;
    Ok(ProfileMoments { mass, mean: mean.rem_euclid(lf), variance })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::node::builtin_diffusion_unitary;

    fn delta(length: usize, site: usize, values: &[f64]) -> LatticeState {
        let mut s = LatticeState::zeros(length, values.len()).unwrap();
        s.set_site(site, values).unwrap();
        s
    }

    #[test]
    fn stream_examples() {
        let s = LatticeState::new(3, 2, vec![0.1, 0.2, 0.3, 0.4, 0.5, 0.6]).unwrap();
        assert_eq!(stream(&s, &VelocityMap::new(vec![0, 0]).unwrap()).unwrap(), s);

        let s = LatticeState::new(4, 1, vec![1.0, 0.0, 0.0, 0.0]).unwrap();
        let v = VelocityMap::new(vec![1]).unwrap();
        assert_eq!(stream(&s, &v).unwrap().values(), &[0.0, 1.0, 0.0, 0.0]);

        let s = LatticeState::new(5, 2, (0..10).map(|k| k as f64 / 10.0).collect()).unwrap();
        let v = VelocityMap::two_channel();
        let mut t = s.clone();
        for _ in 0..5 {
            t = stream(&t, &v).unwrap();
        }
        assert_eq!(t, s);
    }

    #[test]
    fn stream_moves_channels_oppositely() {
        let s = delta(6, 2, &[0.7, 0.3]);
        let t = stream(&s, &VelocityMap::two_channel()).unwrap();
        assert_eq!(t.site(3), &[0.7, 0.0]);
        assert_eq!(t.site(1), &[0.0, 0.3]);
        assert_eq!(t.total_mass(), s.total_mass());
    }

    #[test]
    fn stream_rejects_mismatched_map() {
        let s = LatticeState::zeros(4, 2).unwrap();
        assert!(stream(&s, &VelocityMap::new(vec![1]).unwrap()).is_err());
        assert!(stream(&s, &VelocityMap::new(vec![5, 0]).unwrap()).is_err());
    }

    #[test]
    fn state_validation() {
        assert!(LatticeState::new(2, 2, vec![0.0; 3]).is_err());
        let err = LatticeState::new(2, 2, vec![0.0, 0.0, 0.0, 1.5]).unwrap_err();
        assert!(matches!(err, Error::AtSite { site: 1, .. }), "{err}");
        assert!(LatticeState::new(0, 2, vec![]).is_err());
    }

    #[test]
    fn identity_step_is_a_no_op() {
        let s = LatticeState::new(3, 2, vec![0.1, 0.9, 0.5, 0.5, 0.0, 1.0]).unwrap();
        let u = UnitaryOperator::identity(2).unwrap();
        let v = VelocityMap::new(vec![0, 0]).unwrap();
        for mode in [CollisionMode::Pure, CollisionMode::Mixed] {
            let t = step(&s, &u, &v, mode, 0).unwrap();
            for (a, b) in t.values().iter().zip(s.values()) {
                assert!((a - b).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn uniform_state_is_a_fixed_point() {
        let s = LatticeState::uniform(2, &[0.3, 0.3]).unwrap();
        let t = step(&s, &builtin_diffusion_unitary(), &VelocityMap::two_channel(), CollisionMode::Pure, 0).unwrap();
        for v in t.values() {
            assert!((v - 0.3).abs() < 1e-15);
        }
    }

    #[test]
    fn single_site_excitation_splits() {
        let s = delta(8, 4, &[0.5, 0.5]);
        let t = step(&s, &builtin_diffusion_unitary(), &VelocityMap::two_channel(), CollisionMode::Pure, 0).unwrap();
        assert!((t.site(5)[0] - 0.5).abs() < 1e-15);
        assert!((t.site(3)[1] - 0.5).abs() < 1e-15);
        assert!((t.total_mass() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn run_with_zero_steps_returns_initial() {
        let s = delta(8, 4, &[0.5, 0.5]);
        let series =
            run(&s, &builtin_diffusion_unitary(), &VelocityMap::two_channel(), CollisionMode::Pure, 0, 1).unwrap();
        assert_eq!(series, vec![Snapshot { time: 0, state: s.clone() }]);
        assert!(run(&s, &builtin_diffusion_unitary(), &VelocityMap::two_channel(), CollisionMode::Pure, 3, 0).is_err());
    }

    #[test]
    fn run_records_every_k_steps() {
        let s = delta(16, 8, &[0.5, 0.5]);
        let series =
            run(&s, &builtin_diffusion_unitary(), &VelocityMap::two_channel(), CollisionMode::Mixed, 7, 3).unwrap();
        let times: Vec<u64> = series.iter().map(|s| s.time).collect();
        assert_eq!(times, vec![0, 3, 6]);
    }

    #[test]
    fn run_errors_carry_step_and_site() {
        let s = delta(4, 0, &[0.5, 0.5]);
        let u3 = UnitaryOperator::identity(3).unwrap();
        assert!(run(&s, &u3, &VelocityMap::two_channel(), CollisionMode::Pure, 2, 1).is_err());
    }

    #[test]
    fn diffusion_variance_grows_by_one_per_step() {
        let s = delta(512, 256, &[0.5, 0.5]);
        let series =
            run(&s, &builtin_diffusion_unitary(), &VelocityMap::two_channel(), CollisionMode::Pure, 100, 100).unwrap();
        let last = &series.last().unwrap().state;
        let m = profile_moments(&density_profile(last)).unwrap();
        assert!((m.variance - 100.0).abs() < 1e-9, "{m:?}");
        assert!((m.mean - 256.0).abs() < 1e-9);
        assert!((m.mass - 1.0).abs() < 1e-12);
    }

    #[test]
    fn density_profile_examples() {
        assert_eq!(density_profile(&LatticeState::zeros(3, 2).unwrap()), vec![0.0; 3]);
        assert_eq!(density_profile(&delta(3, 1, &[0.5, 0.25])), vec![0.0, 0.75, 0.0]);
        assert_eq!(density_profile(&LatticeState::uniform(4, &[0.2, 0.2, 0.2]).unwrap()).len(), 4);
        for v in density_profile(&LatticeState::uniform(4, &[0.25, 0.25, 0.25]).unwrap()) {
            assert_eq!(v, 0.75);
        }
    }

    #[test]
    fn moments_examples() {
        let mut p = vec![0.0; 32];
        p[10] = 1.0;
        let m = profile_moments(&p).unwrap();
        assert_eq!(m.mass, 1.0);
        assert!((m.mean - 10.0).abs() < 1e-12);
        assert!(m.variance.abs() < 1e-12);

        let mut p = vec![0.0; 32];
        p[9] = 0.5;
        p[11] = 0.5;
        let m = profile_moments(&p).unwrap();
        assert!((m.mean - 10.0).abs() < 1e-12 && (m.variance - 1.0).abs() < 1e-12);

        assert!(profile_moments(&[0.0; 5]).is_err());
    }

    #[test]
    fn moments_unwrap_across_the_boundary() {
        let mut p = vec![0.0; 20];
        p[19] = 0.5;
        p[1] = 0.5;
        let m = profile_moments(&p).unwrap();
        assert!(m.mean.abs() < 1e-12 || (m.mean - 20.0).abs() < 1e-12, "{m:?}");
        assert!((m.variance - 1.0).abs() < 1e-12);
    }

    #[test]
    fn shifted_is_periodic_translation() {
        let s = LatticeState::new(3, 1, vec![0.1, 0.2, 0.3]).unwrap();
        assert_eq!(s.shifted(1).values(), &[0.3, 0.1, 0.2]);
        assert_eq!(s.shifted(-4), s.shifted(2));
    }
}
