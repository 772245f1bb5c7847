//! Simulation primitives for quantum measurement complexity: how many
//! copies of a state a measurement strategy consumes to reach a given
//! accuracy.
//!
//! * [`qstate`]: single-qubit polarization algebra, Stokes parameters, fidelity
//! * [`fock`]: truncated Fock space, oscillator operators, number and phase spreads
//! * [`measure`]: seeded Born-rule sampling with copy budgets
//! * [`oracle`]: exact and noisy measurement oracles, verifier, query oracle
//! * [`estimate`]: tomography, bisection, maximum likelihood, complexity profiles
//! * [`clone`]: universal cloning channel and tomography on clones
//! * [`wigner`]: homodyne sinograms and inverse Radon reconstruction
//!
//! All randomness flows from explicit [`Seed`]s, so every result is
//! reproducible.

pub mod clone;
pub mod error;
pub mod estimate;
pub mod fock;
pub mod measure;
pub mod oracle;
pub mod qstate;
pub mod stats;
pub mod wigner;

pub use error::{Error, Result};
pub use measure::{CopyBudget, OutcomeCounts, PauliAxis, Seed};
pub use qstate::{DensityMatrix, PolarizationAngle, PureQubit, StokesVector};

pub use num_complex::Complex64;
