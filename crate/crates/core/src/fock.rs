//! Truncated Fock-space numerics in natural units (ħ = m = ω = 1).
//!
//! Quadrature convention: `x = (a + a†)/√2`, `p = (a − a†)/(i√2)`, so the
//! vacuum has `Var(x) = Var(p) = ½`. The Wigner module uses the same one.

use std::f64::consts::PI;

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Normalization tolerance for a truncated state.
pub const NORM_TOL: f64 = 1e-9;
/// Weight allowed to leak past the truncation when building coherent states.
pub const MAX_LEAKAGE: f64 = 1e-8;
/// Number of top levels inspected for the truncation-edge flag.
pub const EDGE_LEVELS: usize = 4;
/// Weight in the top [`EDGE_LEVELS`] levels above which a state is flagged.
pub const EDGE_WEIGHT: f64 = 1e-6;
/// Tolerance on the `satisfied` flag of an uncertainty check.
pub const UNCERTAINTY_TOL: f64 = 1e-8;
const HERMITIAN_TOL: f64 = 1e-10;

/// A normalized state over the number basis `|0⟩..|D−1⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    amplitudes: Array1<C64>,
}

impl FockVector {
    pub fn new(amplitudes: Array1<C64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidArgument("empty Fock vector".into()));
        }
        let norm: f64 = amplitudes.iter().map(|c| c.norm_sqr()).sum();
        if !norm.is_finite() || (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotPhysical(format!("Fock vector norm² = {norm}")));
        }
        Ok(FockVector { amplitudes })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(mut amplitudes: Array1<C64>) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if amplitudes.is_empty() || !(norm.is_finite() && norm > 0.0) {
            return Err(Error::NotPhysical("zero or non-finite amplitudes".into()));
        }
        amplitudes.mapv_inplace(|c| c / norm);
        Ok(FockVector { amplitudes })
    }

    pub fn number_state(n: usize, dim: usize) -> Result<Self> {
        if n >= dim {
            return Err(Error::InvalidArgument(format!("|{n}⟩ outside dimension {dim}")));
        }
        let mut amps = Array1::zeros(dim);
        amps[n] = C64::new(1.0, 0.0);
        Ok(FockVector { amplitudes: amps })
    }

    pub fn vacuum(dim: usize) -> Result<Self> {
        Self::number_state(0, dim)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &Array1<C64> {
        &self.amplitudes
    }

    /// Photon-number distribution `|cₙ|²`.
    pub fn number_distribution(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|c| c.norm_sqr()).collect()
    }

    /// Weight carried by the top [`EDGE_LEVELS`] levels.
    pub fn edge_weight(&self) -> f64 {
        let d = self.dim();
        self.amplitudes
            .iter()
            .skip(d.saturating_sub(EDGE_LEVELS))
            .map(|c| c.norm_sqr())
            .sum()
    }

    /// True when truncation artifacts can reach the state through `a†`.
    pub fn near_truncation_edge(&self) -> bool {
        self.edge_weight() > EDGE_WEIGHT
    }

    /// `(⟨N⟩, ΔN)`.
    pub fn number_statistics(&self) -> (f64, f64) {
        let (mut m1, mut m2) = (0.0, 0.0);
        for (n, c) in self.amplitudes.iter().enumerate() {
            let p = c.norm_sqr();
            let n = n as f64;
            m1 += p * n;
            m2 += p * n * n;
        }
        (m1, (m2 - m1 * m1).max(0.0).sqrt())
    }
}

fn ln_poisson(mean: f64, n: usize) -> f64 {
    if mean == 0.0 {
        return if n == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    -mean + n as f64 * mean.ln() - statrs::function::gamma::ln_gamma(n as f64 + 1.0)
}

/// Poisson weight beyond the truncation, `Σ_{n≥D} e^{−μ} μⁿ/n!`.
pub fn poisson_tail(mean: f64, dim: usize) -> f64 {
    if mean == 0.0 {
        return 0.0;
    }
    let mut total = 0.0;
    let mut n = dim;
    loop {
        let term = ln_poisson(mean, n).exp();
        total += term;
        if (n as f64 > mean && term < total * 1e-17) || term == 0.0 && n as f64 > mean {
            break;
        }
        n += 1;
    }
    total
}

/// Coherent state `|α0⟩` truncated to `dim` levels and renormalized.
pub fn coherent_state(alpha0: C64, dim: usize) -> Result<FockVector> {
    if dim == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    let mean = alpha0.norm_sqr();
    let leakage = poisson_tail(mean, dim);
    if leakage >= MAX_LEAKAGE {
        return Err(Error::Truncation { dim, leakage });
    }
    let phase = alpha0.arg();
    let amps: Array1<C64> = (0..dim)
        .map(|n| C64::from_polar((0.5 * ln_poisson(mean, n)).exp(), phase * n as f64))
        .collect();
    FockVector::normalized(amps)
}

/// Physical dimension attached to an operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Units {
    Dimensionless,
    Position,
    Momentum,
    Energy,
}

/// A dense `D×D` operator on the truncated space.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    entries: Array2<C64>,
    units: Units,
}

impl OperatorMatrix {
    pub fn new(entries: Array2<C64>, units: Units) -> Result<Self> {
        let (r, c) = entries.dim();
        if r != c {
            return Err(Error::DimensionMismatch { expected: r, got: c });
        }
        Ok(OperatorMatrix { entries, units })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &Array2<C64> {
        &self.entries
    }

    pub fn units(&self) -> Units {
        self.units
    }

    /// Largest entrywise deviation from Hermiticity.
    pub fn hermitian_deviation(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for r in 0..d {
            for c in r..d {
                worst = worst.max((self.entries[[r, c]] - self.entries[[c, r]].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian_deviation() <= HERMITIAN_TOL
    }

    pub fn apply(&self, psi: &FockVector) -> Result<Array1<C64>> {
        if psi.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: psi.dim(),
            });
        }
        Ok(self.entries.dot(&psi.amplitudes))
    }

    /// `⟨ψ|A|ψ⟩`.
    pub fn expectation(&self, psi: &FockVector) -> Result<C64> {
        let a_psi = self.apply(psi)?;
        Ok(inner(&psi.amplitudes, &a_psi))
    }

    pub fn matmul(&self, other: &OperatorMatrix, units: Units) -> OperatorMatrix {
        OperatorMatrix {
            entries: self.entries.dot(&other.entries),
            units,
        }
    }

    /// `AB − BA` on the truncated space.
    pub fn commutator(&self, other: &OperatorMatrix) -> OperatorMatrix {
        let ab = self.entries.dot(&other.entries);
        let ba = other.entries.dot(&self.entries);
        OperatorMatrix {
            entries: ab - ba,
            units: Units::Dimensionless,
        }
    }
}

fn inner(a: &Array1<C64>, b: &Array1<C64>) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// The oscillator ladder and observables for one truncation dimension.
#[derive(Debug, Clone)]
pub struct OscillatorOperators {
    pub annihilation: OperatorMatrix,
    pub creation: OperatorMatrix,
    pub number: OperatorMatrix,
    pub position: OperatorMatrix,
    pub momentum: OperatorMatrix,
    pub hamiltonian: OperatorMatrix,
}

/// Builds `a`, `a†`, `N`, `x`, `p` and `H = p²/2 + x²/2` on `dim` levels.
pub fn oscillator_operators(dim: usize) -> Result<OscillatorOperators> {
    if dim < 2 {
        return Err(Error::InvalidArgument("oscillator needs dimension ≥ 2".into()));
    }
    let mut a = Array2::<C64>::zeros((dim, dim));
    for n in 0..dim - 1 {
        a[[n, n + 1]] = C64::new(((n + 1) as f64).sqrt(), 0.0);
    }
    let adag = a.t().mapv(|c| c.conj());
    let number = adag.dot(&a);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let x = (&a + &adag).mapv(|c| c * s);
    // (a − a†)/(i√2) = −i(a − a†)/√2
    let p = (&a - &adag).mapv(|c| c * C64::new(0.0, -s));
    let h = (p.dot(&p) + x.dot(&x)).mapv(|c| c * 0.5);
    Ok(OscillatorOperators {
        annihilation: OperatorMatrix {
            entries: a,
            units: Units::Dimensionless,
        },
        creation: OperatorMatrix {
            entries: adag,
            units: Units::Dimensionless,
        },
        number: OperatorMatrix {
            entries: number,
            units: Units::Dimensionless,
        },
        position: OperatorMatrix {
            entries: x,
            units: Units::Position,
        },
        momentum: OperatorMatrix {
            entries: p,
            units: Units::Momentum,
        },
        hamiltonian: OperatorMatrix {
            entries: h,
            units: Units::Energy,
        },
    })
}

/// One-sided phase shift `E = Σₙ |n⟩⟨n+1|`, so that `a = E √N`.
pub fn phase_shift_operator(dim: usize) -> OperatorMatrix {
    let mut e = Array2::<C64>::zeros((dim, dim));
    for n in 0..dim.saturating_sub(1) {
        e[[n, n + 1]] = C64::new(1.0, 0.0);
    }
    OperatorMatrix {
        entries: e,
        units: Units::Dimensionless,
    }
}

/// `√N = diag(√n)`.
pub fn sqrt_number_operator(dim: usize) -> OperatorMatrix {
    let mut m = Array2::<C64>::zeros((dim, dim));
    for n in 0..dim {
        m[[n, n]] = C64::new((n as f64).sqrt(), 0.0);
    }
    OperatorMatrix {
        entries: m,
        units: Units::Dimensionless,
    }
}

/// Spreads of two observables against the commutator bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UncertaintyReport {
    pub delta_a: f64,
    pub delta_b: f64,
    /// `½|⟨[A,B]⟩|`.
    pub bound: f64,
    /// `ΔA·ΔB ≥ bound − 1e−8`.
    pub satisfied: bool,
    /// The state has weight near the truncation edge; treat as advisory.
    pub near_edge: bool,
}

impl UncertaintyReport {
    pub fn product(&self) -> f64 {
        self.delta_a * self.delta_b
    }
}

/// Evaluates `ΔA ΔB ≥ ½|⟨[A,B]⟩|` with `(ΔA)² = ⟨A²⟩ − ⟨A⟩²`.
pub fn uncertainty_check(a: &OperatorMatrix, b: &OperatorMatrix, psi: &FockVector) -> Result<UncertaintyReport> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    for op in [a, b] {
        let dev = op.hermitian_deviation();
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian(dev));
        }
    }
    let a_psi = a.apply(psi)?;
    let b_psi = b.apply(psi)?;
    let mean_a = inner(&psi.amplitudes, &a_psi).re;
    let mean_b = inner(&psi.amplitudes, &b_psi).re;
    let sq_a: f64 = a_psi.iter().map(|c| c.norm_sqr()).sum();
    let sq_b: f64 = b_psi.iter().map(|c| c.norm_sqr()).sum();
    let delta_a = (sq_a - mean_a * mean_a).max(0.0).sqrt();
    let delta_b = (sq_b - mean_b * mean_b).max(0.0).sqrt();
    // ⟨ψ|[A,B]|ψ⟩ = ⟨Aψ|Bψ⟩ − ⟨Bψ|Aψ⟩ for Hermitian A, B
    let overlap = inner(&a_psi, &b_psi);
    let comm = overlap - overlap.conj();
    let bound = 0.5 * comm.norm();
    Ok(UncertaintyReport {
        delta_a,
        delta_b,
        bound,
        satisfied: delta_a * delta_b >= bound - UNCERTAINTY_TOL,
        near_edge: psi.near_truncation_edge(),
    })
}

/// Phase state `|θ⟩ = D^{−1/2} Σ_{n=0}^{D−1} e^{inθ}|n⟩`.
pub fn phase_state(theta: f64, dim: usize) -> Result<FockVector> {
    if dim == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    let norm = (dim as f64).sqrt().recip();
    let amps = (0..dim).map(|n| C64::from_polar(norm, n as f64 * theta)).collect();
    Ok(FockVector { amplitudes: amps })
}

/// Phase angles `θⱼ = 2πj/D` of the orthonormal phase basis.
pub fn phase_grid(dim: usize) -> Vec<f64> {
    (0..dim).map(|j| 2.0 * PI * j as f64 / dim as f64).collect()
}

/// `P(θⱼ) = |⟨θⱼ|ψ⟩|²` over the `D` orthonormal phase states.
pub fn phase_distribution(psi: &FockVector) -> Vec<f64> {
    let dim = psi.dim();
    let norm = (dim as f64).recip();
    let grid = phase_grid(dim);
    let mut probs: Vec<f64> = grid
        .iter()
        .map(|&theta| {
            let (s, c) = theta.sin_cos();
            let step = C64::new(c, -s);
            let mut rot = C64::new(1.0, 0.0);
            let mut amp = C64::new(0.0, 0.0);
            for cn in psi.amplitudes.iter() {
                amp += rot * cn;
                rot *= step;
            }
            amp.norm_sqr() * norm
        })
        .collect();
    let total: f64 = probs.iter().sum();
    probs.iter_mut().for_each(|p| *p /= total);
    probs
}

/// Mean phase and phase spread of a state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseStatistics {
    /// Circular mean in `(−π, π]`; zero when the distribution has no
    /// preferred direction.
    pub mean_phase: f64,
    /// Standard deviation of θ over the window `(mean − π, mean + π]`.
    pub delta_theta: f64,
}

/// Phase statistics from the discretized phase-state distribution.
pub fn phase_statistics(psi: &FockVector) -> PhaseStatistics {
    let probs = phase_distribution(psi);
    let grid = phase_grid(psi.dim());
    phase_statistics_from(&grid, &probs)
}

pub(crate) fn phase_statistics_from(grid: &[f64], probs: &[f64]) -> PhaseStatistics {
    let (mut re, mut im) = (0.0, 0.0);
    for (&theta, &p) in grid.iter().zip(probs) {
        re += p * theta.cos();
        im += p * theta.sin();
    }
    let mean_phase = if re.hypot(im) < 1e-12 { 0.0 } else { im.atan2(re) };
    let (mut m1, mut m2) = (0.0, 0.0);
    for (&theta, &p) in grid.iter().zip(probs) {
        let offset = window_offset(theta - mean_phase);
        m1 += p * offset;
        m2 += p * offset * offset;
    }
    PhaseStatistics {
        mean_phase,
        delta_theta: (m2 - m1 * m1).max(0.0).sqrt(),
    }
}

/// Reduces an angle into `(−π, π]`.
fn window_offset(delta: f64) -> f64 {
    let r = (delta + PI).rem_euclid(2.0 * PI) - PI;
    // rem_euclid maps the open end to −π; fold it to +π, tolerating rounding
    if r <= -PI + 1e-12 {
        r + 2.0 * PI
    } else {
        r
    }
}
