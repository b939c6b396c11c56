//! Random collision operators and lattice states for property tests,
//! benchmarks and sweeps.

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::complexlin::ComplexMatrix;
use crate::lattice::LatticeState;
use crate::node::{UnitaryOperator, MAX_QUBITS};

fn check_qubits(qubits: usize) {
    assert!((1..=MAX_QUBITS).contains(&qubits), "qubits must be in 1..={MAX_QUBITS}");
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-distributed `dim x dim` unitary: Gram-Schmidt on the columns of a
/// complex Gaussian matrix.
fn haar_block<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<Vec<Complex64>> {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<Complex64> = (0..dim).map(|_| gaussian(rng)).collect();
        // Two passes keep the columns orthogonal to machine precision.
        for _ in 0..2 {
            for q in &cols {
                let proj: Complex64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= proj * qi;
                }
            }
        }
        let norm = v.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
        if norm > 1e-8 {
            cols.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    cols
}

fn from_columns(cols: &[Vec<Complex64>]) -> ComplexMatrix {
    let dim = cols.len();
    let mut m = ComplexMatrix::zeros(dim, dim);
    for (c, col) in cols.iter().enumerate() {
        for (r, &z) in col.iter().enumerate() {
            m[(r, c)] = z;
        }
    }
    m
}

fn finish(m: ComplexMatrix) -> UnitaryOperator {
    UnitaryOperator::new(m).expect("generated matrix is unitary")
}

/// Haar-random unitary on `qubits` qubits.
pub fn haar_unitary<R: Rng + ?Sized>(qubits: usize, rng: &mut R) -> UnitaryOperator {
    check_qubits(qubits);
    finish(from_columns(&haar_block(1 << qubits, rng)))
}

/// Random unitary whose rows each hold at most two nonzero entries with a
/// relative phase of `±pi/2`, so `Re[U_pm conj(U_pr)] = 0` for every row and
/// column pair.
///
/// States are paired at random; each pair gets the block
/// `[[cos t e^{ia}, i sin t e^{ia}], [i sin t e^{ib}, cos t e^{ib}]]`, an
/// unpaired state gets a phase, and the rows are then randomly permuted.
pub fn constrained_unitary<R: Rng + ?Sized>(qubits: usize, rng: &mut R) -> UnitaryOperator {
    check_qubits(qubits);
    let dim = 1 << qubits;
    let mut states: Vec<usize> = (0..dim).collect();
    states.shuffle(rng);
    let mut m = ComplexMatrix::zeros(dim, dim);
    place_constrained_blocks(&mut m, &states, rng);
    let mut rows: Vec<usize> = (0..dim).collect();
    rows.shuffle(rng);
    finish(permute_rows(&m, &rows))
}

/// Random particle-number-conserving unitary: block diagonal over the
/// sectors of equal Hamming weight. With `constrained`, each sector uses the
/// paired-block structure of [`constrained_unitary`]; otherwise each sector
/// is Haar-random.
pub fn number_conserving_unitary<R: Rng + ?Sized>(qubits: usize, constrained: bool, rng: &mut R) -> UnitaryOperator {
    check_qubits(qubits);
    let dim = 1usize << qubits;
    let mut m = ComplexMatrix::zeros(dim, dim);
    for weight in 0..=qubits as u32 {
        let mut sector: Vec<usize> = (0..dim).filter(|s| s.count_ones() == weight).collect();
        sector.shuffle(rng);
        if constrained {
            let mut block = ComplexMatrix::zeros(dim, dim);
            place_constrained_blocks(&mut block, &sector, rng);
            let mut rows = sector.clone();
            rows.shuffle(rng);
            for (&to, &from) in rows.iter().zip(&sector) {
                for &c in &sector {
                    m[(to, c)] = block[(from, c)];
                }
            }
        } else {
            let cols = haar_block(sector.len(), rng);
            for (j, col) in cols.iter().enumerate() {
                for (i, &z) in col.iter().enumerate() {
                    m[(sector[i], sector[j])] = z;
                }
            }
        }
    }
    finish(m)
}

fn place_constrained_blocks<R: Rng + ?Sized>(m: &mut ComplexMatrix, states: &[usize], rng: &mut R) {
    let mut chunks = states.chunks_exact(2);
    for pair in &mut chunks {
        let (s, r) = (pair[0], pair[1]);
        let t: f64 = rng.random_range(0.0..FRAC_PI_2);
        let ea = Complex64::from_polar(1.0, rng.random_range(0.0..TAU));
        let eb = Complex64::from_polar(1.0, rng.random_range(0.0..TAU));
        let i = Complex64::i();
        m[(s, s)] = ea * t.cos();
        m[(s, r)] = ea * i * t.sin();
        m[(r, s)] = eb * i * t.sin();
        m[(r, r)] = eb * t.cos();
    }
    if let [s] = chunks.remainder() {
        m[(*s, *s)] = Complex64::from_polar(1.0, rng.random_range(0.0..TAU));
    }
}

fn permute_rows(m: &ComplexMatrix, order: &[usize]) -> ComplexMatrix {
    let dim = m.rows();
    let mut out = ComplexMatrix::zeros(dim, dim);
    for (to, &from) in order.iter().enumerate() {
        for c in 0..dim {
            out[(to, c)] = m[(from, c)];
        }
    }
    out
}

/// Occupations drawn uniformly from `[0, 1]` at every site and channel.
pub fn random_state<R: Rng + ?Sized>(length: usize, qubits: usize, rng: &mut R) -> LatticeState {
    let f = (0..length * qubits).map(|_| rng.random_range(0.0..=1.0)).collect();
    LatticeState::new(length, qubits, f).expect("values lie in [0, 1]")
}
