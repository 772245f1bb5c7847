//! Born-rule sampling with copy accounting.
//!
//! Every call that touches a copy of the state charges a [`CopyBudget`];
//! the consumed count is the measurement-complexity resource.

use std::borrow::Cow;
use std::f64::consts::FRAC_PI_4;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};
use crate::qstate::{DensityMatrix, PureQubit};

/// Largest draw that is simulated copy by copy; larger draws use an exact
/// binomial sampler on the same seeded stream.
pub const PER_COPY_LIMIT: u64 = 1_000_000;

/// A 64-bit seed for a counter-based ChaCha stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Seed(pub u64);

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl Seed {
    /// Sub-seed for `(trial, call)`; distinct triples give unrelated streams.
    pub fn derive(self, trial: u64, call: u64) -> Seed {
        let h = splitmix64(self.0);
        let h = splitmix64(h ^ trial);
        Seed(splitmix64(h ^ call.rotate_left(32)))
    }

    /// Sub-seed for the `call`-th draw inside one operation.
    pub fn stream(self, call: u64) -> Seed {
        self.derive(u64::MAX, call)
    }

    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}

impl From<u64> for Seed {
    fn from(v: u64) -> Self {
        Seed(v)
    }
}

/// Copies consumed by one strategy, with an optional ceiling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CopyBudget {
    strategy: Cow<'static, str>,
    consumed: u64,
    limit: Option<u64>,
}

impl CopyBudget {
    pub fn unlimited(strategy: impl Into<Cow<'static, str>>) -> Self {
        CopyBudget {
            strategy: strategy.into(),
            consumed: 0,
            limit: None,
        }
    }

    pub fn with_limit(strategy: impl Into<Cow<'static, str>>, limit: u64) -> Self {
        CopyBudget {
            strategy: strategy.into(),
            consumed: 0,
            limit: Some(limit),
        }
    }

    pub fn consumed(&self) -> u64 {
        self.consumed
    }

    pub fn limit(&self) -> Option<u64> {
        self.limit
    }

    pub fn strategy(&self) -> &str {
        &self.strategy
    }

    pub fn remaining(&self) -> Option<u64> {
        self.limit.map(|l| l - self.consumed)
    }

    /// Fails without charging anything if `n` more copies would overspend.
    pub fn ensure(&self, n: u64) -> Result<()> {
        match self.limit {
            Some(limit) if self.consumed.checked_add(n).is_none_or(|t| t > limit) => Err(Error::BudgetExhausted {
                strategy: self.strategy.to_string(),
                requested: n,
                consumed: self.consumed,
                limit,
            }),
            _ => Ok(()),
        }
    }

    pub fn charge(&mut self, n: u64) -> Result<()> {
        self.ensure(n)?;
        self.consumed += n;
        Ok(())
    }
}

/// Pauli measurement axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

impl PauliAxis {
    pub const ALL: [PauliAxis; 3] = [PauliAxis::X, PauliAxis::Y, PauliAxis::Z];

    pub fn index(self) -> usize {
        match self {
            PauliAxis::X => 0,
            PauliAxis::Y => 1,
            PauliAxis::Z => 2,
        }
    }
}

/// Basis in which a batch of copies was measured.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeasurementBasis {
    /// Linear analyzer at this angle; "pass" means the photon is transmitted.
    Linear(f64),
    /// Pauli observable; "pass" means the +1 eigenvalue.
    Pauli(PauliAxis),
}

impl MeasurementBasis {
    /// Analyzer angle for linear bases and the two linear Pauli axes
    /// (Z ↔ 0, X ↔ π/4); `None` for the circular Y basis.
    pub fn angle(self) -> Option<f64> {
        match self {
            MeasurementBasis::Linear(b) => Some(b),
            MeasurementBasis::Pauli(PauliAxis::Z) => Some(0.0),
            MeasurementBasis::Pauli(PauliAxis::X) => Some(FRAC_PI_4),
            MeasurementBasis::Pauli(PauliAxis::Y) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutcomeCounts {
    pub n_pass: u64,
    pub n_fail: u64,
    pub basis: MeasurementBasis,
}

impl OutcomeCounts {
    pub fn total(&self) -> u64 {
        self.n_pass + self.n_fail
    }

    pub fn pass_fraction(&self) -> f64 {
        if self.total() == 0 {
            0.0
        } else {
            self.n_pass as f64 / self.total() as f64
        }
    }

    /// Mean of the ±1 outcomes.
    pub fn mean_sign(&self) -> f64 {
        2.0 * self.pass_fraction() - 1.0
    }
}

/// `|⟨φ(b)|ψ⟩|²` with `φ(b) = cos b|H⟩ + sin b|V⟩`.
pub fn born_probability(state: &PureQubit, basis_angle: f64) -> f64 {
    let (s, c) = basis_angle.sin_cos();
    let amp = state.alpha() * c + state.beta() * s;
    amp.norm_sqr().clamp(0.0, 1.0)
}

/// Number of successes in `n` Bernoulli(`p`) trials drawn from `seed`.
pub fn bernoulli_count(p: f64, n: u64, seed: Seed) -> u64 {
    let p = p.clamp(0.0, 1.0);
    let mut rng = seed.rng();
    if n <= PER_COPY_LIMIT {
        (0..n).filter(|_| rng.random::<f64>() < p).count() as u64
    } else {
        Binomial::new(n, p)
            .expect("probability clamped into [0, 1]")
            .sample(&mut rng)
    }
}

/// Measures `n` copies of `state` with a linear analyzer at `basis_angle`.
pub fn sample_polarization(
    state: &PureQubit,
    basis_angle: f64,
    n: u64,
    seed: Seed,
    budget: &mut CopyBudget,
) -> Result<OutcomeCounts> {
    budget.charge(n)?;
    let n_pass = bernoulli_count(born_probability(state, basis_angle), n, seed);
    Ok(OutcomeCounts {
        n_pass,
        n_fail: n - n_pass,
        basis: MeasurementBasis::Linear(basis_angle),
    })
}

/// Probability of the +1 outcome, `(1 + tr(σ ρ))/2`.
pub fn pauli_plus_probability(rho: &DensityMatrix, axis: PauliAxis) -> f64 {
    0.5 * (1.0 + rho.pauli_expectations()[axis.index()])
}

/// Measures `n` copies of `rho` in the eigenbasis of a Pauli operator.
pub fn sample_pauli(
    rho: &DensityMatrix,
    axis: PauliAxis,
    n: u64,
    seed: Seed,
    budget: &mut CopyBudget,
) -> Result<OutcomeCounts> {
    budget.charge(n)?;
    let n_pass = bernoulli_count(pauli_plus_probability(rho, axis), n, seed);
    Ok(OutcomeCounts {
        n_pass,
        n_fail: n - n_pass,
        basis: MeasurementBasis::Pauli(axis),
    })
}
