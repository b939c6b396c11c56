//! Simulator for hybrid quantum-classical lattice gases.
//!
//! Each lattice node holds a few qubits, one per velocity channel. A time
//! step encodes the channel occupations `f_i(x)` into a density matrix,
//! conjugates it by a collision unitary `U`, measures the new occupations and
//! streams them to neighbouring nodes. Only classical averages cross between
//! nodes, so every such scheme is a lattice-Boltzmann method; when
//! `Re[U_pm conj(U_pr)] = 0` for all rows `p` and column pairs `m < r`, its
//! collision is exactly the doubly stochastic matrix `A_pm = |U_pm|^2` acting
//! on the molecular-chaos state probabilities.
//!
//! Modules:
//!
//! - [`complexlin`]: small dense complex matrices.
//! - [`node`]: per-site encoding, collision, readout and constraint analysis.
//! - [`lattice`]: collide-then-stream time stepping on a periodic 1D lattice.
//! - [`oracle`]: an independent, real-valued lattice-Boltzmann reference path
//!   and Markov-chain iteration.
//! - [`ensemble`]: finite-ensemble readout with keyed random streams.
//! - [`random`]: random collision unitaries and lattice states.
//!
//! Site updates run on the rayon pool when the default `parallel` feature is
//! enabled; see [`Execution`].

pub mod complexlin;
pub mod ensemble;
mod error;
mod exec;
pub mod lattice;
pub mod node;
pub mod oracle;
pub mod random;
pub mod stream;

pub use complexlin::{ComplexMatrix, Tolerance};
pub use error::{Error, Result};
pub use exec::Execution;
pub use lattice::{CollisionMode, LatticeState, Snapshot, VelocityMap};
pub use node::{ChannelOccupations, DensityMatrix, InducedStochasticMatrix, UnitaryOperator};
pub use num_complex::Complex64;
