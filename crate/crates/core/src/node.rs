//! Per-node collision: encode occupations into a density matrix, conjugate by
//! the collision unitary, read the occupations back out.
//!
//! Basis convention: state index `s` of a `b`-qubit node has channel 1 as its
//! most significant bit, so for `b = 2` the basis order is `00, 01, 10, 11`
//! with the left digit belonging to channel 1.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::complexlin::{
    dagger, hermiticity_residual, mat_mul, trace, unitarity_residual, ComplexMatrix, Tolerance, ONE, ZERO,
};
use crate::error::{Error, Result};

/// Largest supported number of qubits (channels) per node.
pub const MAX_QUBITS: usize = 12;

const VALIDATION_EPS: f64 = 1e-10;

/// Whether channel `channel` (0-based) is occupied in basis state `state`.
#[inline]
pub fn is_occupied(state: usize, channel: usize, qubits: usize) -> bool {
    (state >> (qubits - 1 - channel)) & 1 == 1
}

fn qubits_for_dim(dim: usize) -> Result<usize> {
    if !dim.is_power_of_two() || dim < 2 {
        return Err(Error::NotPowerOfTwo(dim));
    }
    let b = dim.trailing_zeros() as usize;
    if b > MAX_QUBITS {
        return Err(Error::TooManyQubits(b));
    }
    Ok(b)
}

fn check_qubits(b: usize) -> Result<()> {
    if b == 0 {
        Err(Error::InvalidInput("a node needs at least one channel".into()))
    } else if b > MAX_QUBITS {
        Err(Error::TooManyQubits(b))
    } else {
        Ok(())
    }
}

/// Single-particle occupation probabilities `f_i` of the channels at one node.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelOccupations(Vec<f64>);

impl ChannelOccupations {
    pub fn new(f: Vec<f64>) -> Result<Self> {
        check_qubits(f.len())?;
        if let Some((channel, &value)) = f.iter().enumerate().find(|(_, v)| !(0.0..=1.0).contains(*v)) {
            return Err(Error::OccupationOutOfRange { channel, value });
        }
        Ok(ChannelOccupations(f))
    }

    pub fn qubits(&self) -> usize {
        self.0.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let qubits = qubits_for_dim(amplitudes.len())?;
        let norm2: f64 = amplitudes.iter().map(Complex64::norm_sqr).sum();
        if !norm2.is_finite() || (norm2 - 1.0).abs() > VALIDATION_EPS {
            return Err(Error::Unnormalized(norm2));
        }
        Ok(PureState { qubits, amplitudes })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }
}

/// Basis-state probabilities `n_s`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateProbabilities {
    qubits: usize,
    n: Vec<f64>,
}

impl StateProbabilities {
    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn values(&self) -> &[f64] {
        &self.n
    }
}

/// Hermitian, unit-trace node state.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    qubits: usize,
    rho: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and diagonal range to within `1e-10`.
    pub fn new(rho: ComplexMatrix) -> Result<Self> {
        if !rho.is_square() {
            return Err(Error::NotSquare { rows: rho.rows(), cols: rho.cols() });
        }
        let qubits = qubits_for_dim(rho.rows())?;
        let herm = hermiticity_residual(&rho)?;
        if herm > VALIDATION_EPS {
            return Err(Error::InvalidDensity(format!("hermiticity residual {herm:.3e}")));
        }
        let tr = trace(&rho)?;
        if (tr - ONE).norm() > VALIDATION_EPS {
            return Err(Error::InvalidDensity(format!("trace {tr}")));
        }
        for (s, d) in rho.diagonal().iter().enumerate() {
            if d.re < -VALIDATION_EPS || d.re > 1.0 + VALIDATION_EPS {
                return Err(Error::InvalidDensity(format!("diagonal entry {s} = {}", d.re)));
            }
        }
        Ok(DensityMatrix { qubits, rho })
    }

    #[cfg(test)]
    /// Skips validation; the dimension must already be a power of two.
    pub(crate) fn unchecked(rho: ComplexMatrix) -> Self {
        DensityMatrix { qubits: rho.rows().trailing_zeros() as usize, rho }
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        self.rho.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.rho
    }

    /// Real parts of the diagonal.
    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|s| self.rho[(s, s)].re).collect()
    }
}

/// A validated collision unitary acting on one node.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryOperator {
    qubits: usize,
    u: ComplexMatrix,
    u_dagger: ComplexMatrix,
}

impl UnitaryOperator {
    /// Rejects matrices that are not square, not of power-of-two dimension,
    /// or not unitary to within `1e-10`. Nothing is renormalized.
    pub fn new(u: ComplexMatrix) -> Result<Self> {
        if !u.is_square() {
            return Err(Error::NotSquare { rows: u.rows(), cols: u.cols() });
        }
        let qubits = qubits_for_dim(u.rows())?;
        let (residual, row, col) = unitarity_residual(&u)?;
        if residual > VALIDATION_EPS {
            return Err(Error::NotUnitary { residual, row, col });
        }
        let u_dagger = dagger(&u);
        Ok(UnitaryOperator { qubits, u, u_dagger })
    }

    pub fn identity(qubits: usize) -> Result<Self> {
        check_qubits(qubits)?;
        Self::new(ComplexMatrix::identity(1 << qubits))
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        self.u.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.u
    }

    pub fn adjoint(&self) -> &ComplexMatrix {
        &self.u_dagger
    }
}

/// Doubly stochastic real matrix acting on basis-state probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct InducedStochasticMatrix {
    qubits: usize,
    dim: usize,
    a: Vec<f64>,
}

impl InducedStochasticMatrix {
    /// Row-major entries; every entry must lie in `[0, 1]` and every row and
    /// column must sum to one within `1e-10`.
    pub fn new(dim: usize, a: Vec<f64>) -> Result<Self> {
        let qubits = qubits_for_dim(dim)?;
        if a.len() != dim * dim {
            return Err(Error::DimensionMismatch(format!("{} entries for a {dim}x{dim} matrix", a.len())));
        }
        if let Some(k) = a.iter().position(|&x| !(-VALIDATION_EPS..=1.0 + VALIDATION_EPS).contains(&x)) {
            return Err(Error::InvalidDistribution(format!(
                "entry ({}, {}) = {} outside [0, 1]",
                k / dim,
                k % dim,
                a[k]
            )));
        }
        let m = InducedStochasticMatrix { qubits, dim, a };
        for (i, (r, c)) in m.row_sums().into_iter().zip(m.column_sums()).enumerate() {
            if (r - 1.0).abs() > VALIDATION_EPS {
                return Err(Error::InvalidDistribution(format!("row {i} sums to {r}")));
            }
            if (c - 1.0).abs() > VALIDATION_EPS {
                return Err(Error::InvalidDistribution(format!("column {i} sums to {c}")));
            }
        }
        Ok(m)
    }

    pub fn identity(qubits: usize) -> Result<Self> {
        check_qubits(qubits)?;
        let dim = 1 << qubits;
        let mut a = vec![0.0; dim * dim];
        for i in 0..dim {
            a[i * dim + i] = 1.0;
        }
        Self::new(dim, a)
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, p: usize, m: usize) -> f64 {
        self.a[p * self.dim + m]
    }

    pub fn entries(&self) -> &[f64] {
        &self.a
    }

    pub fn row(&self, p: usize) -> &[f64] {
        &self.a[p * self.dim..(p + 1) * self.dim]
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.dim).map(|p| self.row(p).iter().sum()).collect()
    }

    pub fn column_sums(&self) -> Vec<f64> {
        (0..self.dim).map(|m| (0..self.dim).map(|p| self.get(p, m)).sum()).collect()
    }

    /// `A · n`.
    pub fn apply(&self, n: &[f64]) -> Result<Vec<f64>> {
        if n.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for a {}x{} matrix",
                n.len(),
                self.dim,
                self.dim
            )));
        }
        Ok((0..self.dim).map(|p| self.row(p).iter().zip(n).map(|(a, x)| a * x).sum()).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstraintViolation {
    pub p: usize,
    pub m: usize,
    pub r: usize,
    /// `Re[U_pm conj(U_pr)]`
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintReport {
    pub satisfied: bool,
    pub violations: Vec<ConstraintViolation>,
    pub max_violation: f64,
    pub tolerance: Tolerance,
}

/// Classical and interference contributions to the post-collision diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalUpdate {
    pub classical: Vec<f64>,
    pub interference: Vec<f64>,
}

/// Product-state amplitudes: `psi_s = prod_i sqrt(f_i or 1 - f_i)`, always on
/// the nonnegative real branch.
pub fn encode_pure(f: &ChannelOccupations) -> PureState {
    let n = boltzmann_probabilities(f);
    PureState { qubits: n.qubits, amplitudes: n.n.iter().map(|&p| Complex64::new(p.sqrt(), 0.0)).collect() }
}

/// Molecular-chaos probabilities of the basis states.
pub fn boltzmann_probabilities(f: &ChannelOccupations) -> StateProbabilities {
    let b = f.qubits();
    let n = (0..1usize << b)
        .map(|s| {
            f.values().iter().enumerate().map(|(i, &fi)| if is_occupied(s, i, b) { fi } else { 1.0 - fi }).product()
        })
        .collect();
    StateProbabilities { qubits: b, n }
}

/// `rho = |psi><psi|`.
pub fn density_from_pure(psi: &PureState) -> DensityMatrix {
    let dim = psi.amplitudes.len();
    let mut rho = ComplexMatrix::zeros(dim, dim);
    for (m, &a) in psi.amplitudes.iter().enumerate() {
        for (r, &b) in psi.amplitudes.iter().enumerate() {
            rho[(m, r)] = a * b.conj();
        }
    }
    DensityMatrix { qubits: psi.qubits, rho }
}

/// Diagonal density matrix carrying the Boltzmann probabilities and no
/// coherences.
pub fn encode_mixed(f: &ChannelOccupations) -> DensityMatrix {
    let n = boltzmann_probabilities(f);
    DensityMatrix { qubits: n.qubits, rho: ComplexMatrix::from_real_diagonal(&n.n) }
}

fn check_same_dim(rho: &DensityMatrix, u: &UnitaryOperator) -> Result<()> {
    if rho.dim() != u.dim() {
        return Err(Error::DimensionMismatch(format!(
            "density matrix of dimension {} with unitary of dimension {}",
            rho.dim(),
            u.dim()
        )));
    }
    Ok(())
}

/// `rho' = U rho U^dagger`.
pub fn collide(rho: &DensityMatrix, u: &UnitaryOperator) -> Result<DensityMatrix> {
    check_same_dim(rho, u)?;
    let rho = mat_mul(&mat_mul(&u.u, &rho.rho)?, &u.u_dagger)?;
    Ok(DensityMatrix { qubits: u.qubits, rho })
}

/// Marginal occupation of each channel, `f_i = sum of rho_ss over states with
/// channel i occupied`.
pub fn readout(rho: &DensityMatrix) -> Result<ChannelOccupations> {
    let pops = rho.populations();
    if let Some((s, &p)) = pops.iter().enumerate().find(|(_, &p)| p < -VALIDATION_EPS) {
        return Err(Error::InvalidDensity(format!("negative population {p:.3e} in state {s}")));
    }
    let total: f64 = pops.iter().sum();
    if (total - 1.0).abs() > VALIDATION_EPS {
        return Err(Error::InvalidDensity(format!("trace deviates from one: {total}")));
    }
    marginals(&pops, rho.qubits)
}

/// Channel marginals of a basis-state distribution, clamping round-off within
/// `1e-10` of the unit interval.
pub(crate) fn marginals(pops: &[f64], qubits: usize) -> Result<ChannelOccupations> {
    let f = (0..qubits)
        .map(|i| {
            let v: f64 = pops.iter().enumerate().filter(|(s, _)| is_occupied(*s, i, qubits)).map(|(_, p)| p).sum();
            if (-VALIDATION_EPS..0.0).contains(&v) {
                0.0
            } else if v > 1.0 && v <= 1.0 + VALIDATION_EPS {
                1.0
            } else {
                v
            }
        })
        .collect();
    ChannelOccupations::new(f)
}

/// Evaluates `Re[U_pm conj(U_pr)]` for every row `p` and every column pair
/// `m < r`.
pub fn check_collision_constraint(u: &UnitaryOperator, tol: Tolerance) -> ConstraintReport {
    let dim = u.dim();
    let mut violations = Vec::new();
    let mut max_violation = 0.0f64;
    for p in 0..dim {
        let row = u.u.row(p);
        for m in 0..dim {
            for r in m + 1..dim {
                let value = (row[m] * row[r].conj()).re;
                max_violation = max_violation.max(value.abs());
                if value.abs() > tol.eps() {
                    violations.push(ConstraintViolation { p, m, r, value });
                }
            }
        }
    }
    ConstraintReport { satisfied: violations.is_empty(), violations, max_violation, tolerance: tol }
}

/// `A_pm = |U_pm|^2`.
pub fn induced_stochastic(u: &UnitaryOperator) -> InducedStochasticMatrix {
    let a = u.u.as_slice().iter().map(Complex64::norm_sqr).collect();
    InducedStochasticMatrix::new(u.dim(), a).expect("squared moduli of a validated unitary are doubly stochastic")
}

/// Splits the post-collision diagonal into `A · diag(rho)` and the remainder
/// contributed by the off-diagonal entries of `rho`.
pub fn diagonal_update_decomposition(rho: &DensityMatrix, u: &UnitaryOperator) -> Result<DiagonalUpdate> {
    check_same_dim(rho, u)?;
    let after = collide(rho, u)?;
    let diag_after = after.rho.diagonal();
    let diag_before = rho.rho.diagonal();
    if let Some(z) = diag_after.iter().chain(&diag_before).find(|z| z.im.abs() > VALIDATION_EPS) {
        return Err(Error::Consistency(format!("diagonal entry {z} has an imaginary part")));
    }
    let a = induced_stochastic(u);
    let before: Vec<f64> = diag_before.iter().map(|z| z.re).collect();
    let classical = a.apply(&before)?;
    let interference = diag_after.iter().zip(&classical).map(|(q, c)| q.re - c).collect();
    Ok(DiagonalUpdate { classical, interference })
}

/// Two-qubit diffusion collision: identity on `00` and `11`, and the block
/// `[[(1-i)/2, (1+i)/2], [(1+i)/2, (1-i)/2]]` on `01, 10`.
pub fn builtin_diffusion_unitary() -> UnitaryOperator {
    let a = Complex64::new(0.5, -0.5);
    let b = Complex64::new(0.5, 0.5);
    two_qubit_middle_block(a, b, b, a)
}

/// Two-qubit unitary with a Hadamard block on `01, 10`. It induces the same
/// stochastic matrix as the diffusion model but violates the cross-term
/// constraint, so its diagonal action is not linear on product states.
pub fn builtin_violating_unitary() -> UnitaryOperator {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    two_qubit_middle_block(h, h, h, -h)
}

fn two_qubit_middle_block(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> UnitaryOperator {
    let m = ComplexMatrix::from_rows(&[
        vec![ONE, ZERO, ZERO, ZERO],
        vec![ZERO, a, b, ZERO],
        vec![ZERO, c, d, ZERO],
        vec![ZERO, ZERO, ZERO, ONE],
    ])
    .expect("4x4 literal");
    UnitaryOperator::new(m).expect("builtin collision is unitary")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn occ(f: &[f64]) -> ChannelOccupations {
        ChannelOccupations::new(f.to_vec()).unwrap()
    }

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn basis_convention_channel_one_is_msb() {
        assert!(!is_occupied(0b01, 0, 2));
        assert!(is_occupied(0b01, 1, 2));
        assert!(is_occupied(0b10, 0, 2));
    }

    #[test]
    fn occupations_validate_range_and_size() {
        assert!(matches!(ChannelOccupations::new(vec![0.5, 1.5]), Err(Error::OccupationOutOfRange { channel: 1, .. })));
        assert!(ChannelOccupations::new(vec![f64::NAN]).is_err());
        assert!(ChannelOccupations::new(vec![]).is_err());
        assert!(matches!(ChannelOccupations::new(vec![0.0; 13]), Err(Error::TooManyQubits(13))));
    }

    #[test]
    fn encode_pure_examples() {
        let psi = encode_pure(&occ(&[0.0, 0.0]));
        assert_eq!(psi.amplitudes(), &[ONE, ZERO, ZERO, ZERO]);

        let (f1, f2) = (0.3, 0.8);
        let psi = encode_pure(&occ(&[f1, f2]));
        let expected =
            [((1.0 - f1) * (1.0 - f2)).sqrt(), ((1.0 - f1) * f2).sqrt(), (f1 * (1.0 - f2)).sqrt(), (f1 * f2).sqrt()];
        for (a, e) in psi.amplitudes().iter().zip(expected) {
            assert!((a.re - e).abs() < 1e-15 && a.im == 0.0);
        }

        let sq: Vec<f64> = encode_pure(&occ(&[0.5, 0.25])).amplitudes().iter().map(|a| a.norm_sqr()).collect();
        assert_close(&sq, &[0.375, 0.125, 0.375, 0.125], 1e-15);
    }

    #[test]
    fn boltzmann_examples() {
        assert_eq!(boltzmann_probabilities(&occ(&[1.0, 1.0])).values(), &[0.0, 0.0, 0.0, 1.0]);
        assert_eq!(boltzmann_probabilities(&occ(&[0.5, 0.5])).values(), &[0.25; 4]);
        assert_eq!(boltzmann_probabilities(&occ(&[0.5, 0.25])).values(), &[0.375, 0.125, 0.375, 0.125]);
    }

    #[test]
    fn density_from_pure_examples() {
        let basis = PureState::new(vec![ONE, ZERO, ZERO, ZERO]).unwrap();
        let rho = density_from_pure(&basis);
        assert_eq!(rho.populations(), vec![1.0, 0.0, 0.0, 0.0]);
        assert_eq!(rho.matrix().max_abs_diff(&ComplexMatrix::from_real_diagonal(&[1.0, 0.0, 0.0, 0.0])).unwrap(), 0.0);

        let rho = density_from_pure(&encode_pure(&occ(&[0.5, 0.5])));
        assert!(rho.matrix().as_slice().iter().all(|z| *z == Complex64::new(0.25, 0.0)));

        let rho = density_from_pure(&encode_pure(&occ(&[0.5, 0.25])));
        assert_close(&rho.populations(), &[0.375, 0.125, 0.375, 0.125], 1e-15);
        assert!((trace(rho.matrix()).unwrap() - ONE).norm() < 1e-12);
    }

    #[test]
    fn pure_state_rejects_bad_input() {
        assert!(matches!(PureState::new(vec![ONE, ONE]), Err(Error::Unnormalized(_))));
        assert!(matches!(PureState::new(vec![ONE, ZERO, ZERO]), Err(Error::NotPowerOfTwo(3))));
    }

    #[test]
    fn encode_mixed_examples() {
        let rho = encode_mixed(&occ(&[0.0, 0.0]));
        assert_eq!(rho.populations(), vec![1.0, 0.0, 0.0, 0.0]);
        let rho = encode_mixed(&occ(&[0.5, 0.5]));
        assert_eq!(rho.populations(), vec![0.25; 4]);
        let rho = encode_mixed(&occ(&[0.5, 0.25]));
        assert_eq!(rho.populations(), vec![0.375, 0.125, 0.375, 0.125]);
        for m in 0..4 {
            for r in 0..4 {
                if m != r {
                    assert_eq!(rho.matrix()[(m, r)], ZERO);
                }
            }
        }
    }

    #[test]
    fn collide_examples() {
        let rho = density_from_pure(&encode_pure(&occ(&[0.3, 0.9])));
        let same = collide(&rho, &UnitaryOperator::identity(2).unwrap()).unwrap();
        assert_eq!(same, rho);

        let rho = density_from_pure(&encode_pure(&occ(&[0.5, 0.25])));
        let out = collide(&rho, &builtin_diffusion_unitary()).unwrap();
        assert_close(&out.populations(), &[0.375, 0.25, 0.25, 0.125], 1e-15);

        let rho = density_from_pure(&encode_pure(&occ(&[0.5, 0.5])));
        let out = collide(&rho, &builtin_violating_unitary()).unwrap();
        assert_close(&out.populations(), &[0.25, 0.5, 0.0, 0.25], 1e-15);

        let wrong = UnitaryOperator::identity(3).unwrap();
        assert!(matches!(collide(&rho, &wrong), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn readout_examples() {
        let rho = DensityMatrix::new(ComplexMatrix::from_real_diagonal(&[1.0, 0.0, 0.0, 0.0])).unwrap();
        assert_eq!(readout(&rho).unwrap().values(), &[0.0, 0.0]);

        let rho = density_from_pure(&encode_pure(&occ(&[0.5, 0.25])));
        assert_close(readout(&rho).unwrap().values(), &[0.5, 0.25], 1e-15);

        let rho = density_from_pure(&encode_pure(&occ(&[0.5, 0.5])));
        let out = collide(&rho, &builtin_violating_unitary()).unwrap();
        assert_close(readout(&out).unwrap().values(), &[0.25, 0.75], 1e-15);
    }

    #[test]
    fn readout_rejects_invalid_populations() {
        let bad = DensityMatrix { qubits: 1, rho: ComplexMatrix::from_real_diagonal(&[1.1, -0.1]) };
        assert!(matches!(readout(&bad), Err(Error::InvalidDensity(_))));
        let bad = DensityMatrix { qubits: 1, rho: ComplexMatrix::from_real_diagonal(&[0.5, 0.6]) };
        assert!(matches!(readout(&bad), Err(Error::InvalidDensity(_))));
    }

    #[test]
    fn readout_clamps_round_off() {
        let rho = DensityMatrix { qubits: 1, rho: ComplexMatrix::from_real_diagonal(&[1.0 + 5e-11, -5e-11]) };
        assert_eq!(readout(&rho).unwrap().values(), &[0.0]);
    }

    #[test]
    fn density_matrix_validation() {
        let not_herm =
            ComplexMatrix::from_rows(&[vec![Complex64::new(0.5, 0.0), ONE], vec![ZERO, Complex64::new(0.5, 0.0)]])
                .unwrap();
        assert!(matches!(DensityMatrix::new(not_herm), Err(Error::InvalidDensity(_))));
        assert!(DensityMatrix::new(ComplexMatrix::from_real_diagonal(&[0.5, 0.4])).is_err());
    }

    #[test]
    fn constraint_examples() {
        let tol = Tolerance::DEFAULT;
        let id = check_collision_constraint(&UnitaryOperator::identity(2).unwrap(), tol);
        assert!(id.satisfied);
        assert_eq!(id.max_violation, 0.0);

        let diff = check_collision_constraint(&builtin_diffusion_unitary(), tol);
        assert!(diff.satisfied);
        assert_eq!(diff.max_violation, 0.0);

        let viol = check_collision_constraint(&builtin_violating_unitary(), tol);
        assert!(!viol.satisfied);
        assert!((viol.max_violation - 0.5).abs() < 1e-15);
        let first = viol.violations.iter().find(|v| v.p == 1).unwrap();
        assert_eq!((first.m, first.r), (1, 2));
        assert!((first.value - 0.5).abs() < 1e-15);
        let second = viol.violations.iter().find(|v| v.p == 2).unwrap();
        assert!((second.value + 0.5).abs() < 1e-15);
        assert_eq!(viol.violations.len(), 2);
    }

    #[test]
    fn induced_examples() {
        let a = induced_stochastic(&UnitaryOperator::identity(2).unwrap());
        assert_eq!(a, InducedStochasticMatrix::identity(2).unwrap());

        let expected = [
            1.0, 0.0, 0.0, 0.0, //
            0.0, 0.5, 0.5, 0.0, //
            0.0, 0.5, 0.5, 0.0, //
            0.0, 0.0, 0.0, 1.0,
        ];
        assert_eq!(induced_stochastic(&builtin_diffusion_unitary()).entries(), &expected);
        assert_close(induced_stochastic(&builtin_violating_unitary()).entries(), &expected, 1e-15);
    }

    #[test]
    fn stochastic_matrix_validation() {
        assert!(InducedStochasticMatrix::new(2, vec![0.5, 0.5, 0.5, 0.5]).is_ok());
        assert!(InducedStochasticMatrix::new(2, vec![1.0, 0.0, 1.0, 0.0]).is_err());
        assert!(InducedStochasticMatrix::new(2, vec![1.5, -0.5, -0.5, 1.5]).is_err());
        assert!(InducedStochasticMatrix::new(3, vec![0.0; 9]).is_err());
    }

    #[test]
    fn decomposition_examples() {
        let rho = density_from_pure(&encode_pure(&occ(&[0.5, 0.25])));
        let d = diagonal_update_decomposition(&rho, &builtin_diffusion_unitary()).unwrap();
        assert!(d.interference.iter().all(|x| x.abs() <= 1e-10));
        assert_close(&d.classical, &[0.375, 0.25, 0.25, 0.125], 1e-15);

        let mixed = encode_mixed(&occ(&[0.5, 0.5]));
        let d = diagonal_update_decomposition(&mixed, &builtin_violating_unitary()).unwrap();
        assert!(d.interference.iter().all(|x| x.abs() <= 1e-15));

        let rho = density_from_pure(&encode_pure(&occ(&[0.5, 0.5])));
        let d = diagonal_update_decomposition(&rho, &builtin_violating_unitary()).unwrap();
        assert_close(&d.interference, &[0.0, 0.25, -0.25, 0.0], 1e-15);
        assert_close(&d.classical, &[0.25; 4], 1e-15);
    }

    #[test]
    fn builtin_properties() {
        let tight = Tolerance::new(1e-15).unwrap();
        assert!(crate::complexlin::is_unitary(builtin_diffusion_unitary().matrix(), tight).unwrap());
        assert!(crate::complexlin::is_unitary(builtin_violating_unitary().matrix(), Tolerance::DEFAULT).unwrap());
    }

    #[test]
    fn unitary_validation() {
        let mut m = ComplexMatrix::identity(4);
        m[(2, 2)] = Complex64::new(1.01, 0.0);
        match UnitaryOperator::new(m) {
            Err(Error::NotUnitary { residual, row, col }) => {
                assert!((residual - 0.0201).abs() < 1e-12);
                assert_eq!((row, col), (2, 2));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(UnitaryOperator::new(ComplexMatrix::identity(3)), Err(Error::NotPowerOfTwo(3))));
        assert!(matches!(UnitaryOperator::new(ComplexMatrix::zeros(2, 4)), Err(Error::NotSquare { .. })));
    }
}
