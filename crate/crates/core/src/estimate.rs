//! Copy-counting estimators for an unknown polarization.
//!
//! Three routes are provided, in decreasing order of idealization:
//!
//! * [`bisection_search`]: divide-and-conquer with a truthful half-interval
//!   query per photon. Each query is an abstract device, not a projective
//!   measurement: Born outcomes are probabilistic and cannot answer "which
//!   half?" with certainty from one photon.
//! * [`mle_polarization`]: physically realizable two-basis maximum
//!   likelihood from Born-rule counts.
//! * [`pauli_tomography`]: full single-qubit tomography from Pauli counts.
//!
//! [`complexity_profile`] measures the copies each one needs to reach a
//! target angular accuracy.

use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_4, PI};

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::measure::{sample_pauli, sample_polarization, CopyBudget, OutcomeCounts, PauliAxis, Seed};
use crate::oracle::{exact_oracle, probabilistic_oracle};
use crate::qstate::{wrapped_distance, DensityMatrix, PolarizationAngle, PureQubit};
use crate::stats::{axial_mean, median};

/// Single-qubit tomography output.
#[derive(Debug, Clone, PartialEq)]
pub struct TomographyResult {
    pub rho_hat: DensityMatrix,
    /// Raw `(tx̂, tŷ, tẑ)` before any projection into the Bloch ball.
    pub expectation_estimates: [f64; 3],
    pub copies_used: u64,
    /// `1/√m` per axis.
    pub predicted_std: f64,
}

impl TomographyResult {
    /// Polarization angle of the estimated state, `atan2(tx, tz)/2`.
    ///
    /// A linear state at angle `k` has Bloch vector `(sin 2k, 0, cos 2k)`.
    pub fn polarization_angle(&self) -> PolarizationAngle {
        let [tx, _, tz] = self.expectation_estimates;
        PolarizationAngle::new(0.5 * tx.atan2(tz))
    }
}

/// Pulls a Bloch vector back onto the unit sphere if it lies outside.
pub fn project_to_ball(t: [f64; 3]) -> [f64; 3] {
    let r = (t[0] * t[0] + t[1] * t[1] + t[2] * t[2]).sqrt();
    if r > 1.0 {
        t.map(|c| c / r)
    } else {
        t
    }
}

/// Estimates `tr(Xρ)`, `tr(Yρ)`, `tr(Zρ)` from `m_per_axis` shots each.
pub fn pauli_tomography(
    source: &DensityMatrix,
    m_per_axis: u64,
    seed: Seed,
    budget: &mut CopyBudget,
) -> Result<TomographyResult> {
    if m_per_axis == 0 {
        return Err(Error::InvalidArgument("tomography needs m_per_axis ≥ 1".into()));
    }
    budget.ensure(3 * m_per_axis)?;
    let mut est = [0.0; 3];
    for axis in PauliAxis::ALL {
        let counts = sample_pauli(source, axis, m_per_axis, seed.stream(axis.index() as u64), budget)?;
        est[axis.index()] = 2.0 * counts.n_pass as f64 / m_per_axis as f64 - 1.0;
    }
    let t = project_to_ball(est);
    Ok(TomographyResult {
        rho_hat: DensityMatrix::from_bloch_unchecked(t),
        expectation_estimates: est,
        copies_used: 3 * m_per_axis,
        predicted_std: (m_per_axis as f64).sqrt().recip(),
    })
}

/// Largest bisection depth whose bin edges stay exact in `f64`.
pub const MAX_BISECTION_DEPTH: u32 = 52;

/// The bin of width `π/2ᵐ` found after `m` halvings of `[0, π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinGrid {
    pub m: u32,
    pub bin_width: f64,
    pub bin_index: u64,
}

impl BinGrid {
    pub fn width_for(m: u32) -> f64 {
        PI / 2f64.powi(m as i32)
    }

    fn edge(index: u64, m: u32) -> f64 {
        index as f64 * Self::width_for(m)
    }

    pub fn bins(&self) -> u64 {
        1u64 << self.m
    }

    pub fn lower(&self) -> f64 {
        Self::edge(self.bin_index, self.m)
    }

    pub fn upper(&self) -> f64 {
        Self::edge(self.bin_index + 1, self.m)
    }

    pub fn center(&self) -> f64 {
        Self::edge(2 * self.bin_index + 1, self.m + 1)
    }

    pub fn contains(&self, k: f64) -> bool {
        self.lower() <= k && k < self.upper()
    }
}

/// The interval currently under query: `[lo, mid)` is the left half.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfInterval {
    pub lo: f64,
    pub mid: f64,
    pub hi: f64,
}

/// A truthful half-interval query for the angle `k`.
pub fn ideal_half_interval(k: PolarizationAngle) -> impl FnMut(&HalfInterval) -> bool {
    move |h| k.radians() < h.mid
}

/// Locates the angle to one of `2ᵐ` bins with exactly `m` queries.
///
/// `in_left_half` answers whether the angle lies in `[lo, mid)` of the
/// interval it is shown.
pub fn bisection_search<F>(mut in_left_half: F, m: u32) -> Result<BinGrid>
where
    F: FnMut(&HalfInterval) -> bool,
{
    if m == 0 || m > MAX_BISECTION_DEPTH {
        return Err(Error::InvalidArgument(format!(
            "bisection depth must be in 1..={MAX_BISECTION_DEPTH}, got {m}"
        )));
    }
    let mut index = 0u64;
    for level in 1..=m {
        let h = HalfInterval {
            lo: BinGrid::edge(2 * index, level),
            mid: BinGrid::edge(2 * index + 1, level),
            hi: BinGrid::edge(2 * index + 2, level),
        };
        index = if in_left_half(&h) { 2 * index } else { 2 * index + 1 };
    }
    Ok(BinGrid {
        m,
        bin_width: BinGrid::width_for(m),
        bin_index: index,
    })
}

/// Resolution of the grid scan preceding golden-section refinement.
pub const MLE_GRID_POINTS: usize = 4096;
/// Angular tolerance of the refinement.
pub const MLE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MleEstimate {
    pub k_hat: PolarizationAngle,
    pub copies_used: u64,
    pub counts: [OutcomeCounts; 2],
}

fn xlny(count: u64, p: f64) -> f64 {
    if count == 0 {
        0.0
    } else {
        count as f64 * p.ln()
    }
}

/// Bernoulli log-likelihood of counts taken at analyzers 0 and π/4.
pub fn log_likelihood(counts: &[OutcomeCounts; 2], k: f64) -> f64 {
    let (s0, c0) = k.sin_cos();
    let (s1, c1) = (k - FRAC_PI_4).sin_cos();
    xlny(counts[0].n_pass, c0 * c0)
        + xlny(counts[0].n_fail, s0 * s0)
        + xlny(counts[1].n_pass, c1 * c1)
        + xlny(counts[1].n_fail, s1 * s1)
}

fn golden_section_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Maximizes [`log_likelihood`] over `[0, π)`.
pub fn maximize_likelihood(counts: &[OutcomeCounts; 2]) -> PolarizationAngle {
    let step = PI / MLE_GRID_POINTS as f64;
    let mut best = (0usize, f64::NEG_INFINITY);
    for i in 0..MLE_GRID_POINTS {
        let l = log_likelihood(counts, i as f64 * step);
        // strict comparison keeps the lowest index on ties
        if l > best.1 {
            best = (i, l);
        }
    }
    let center = best.0 as f64 * step;
    let refined = golden_section_max(
        |k| log_likelihood(counts, k),
        center - step,
        center + step,
        MLE_TOLERANCE,
    );
    PolarizationAngle::new(refined)
}

/// Two-basis maximum-likelihood estimate of a linear polarization angle.
///
/// Photons are split evenly between analyzers at 0 and π/4 (the first gets
/// the odd one out); a single basis cannot tell `k` from `−k`.
pub fn mle_polarization(
    true_state: &PureQubit,
    n_photons: u64,
    seed: Seed,
    budget: &mut CopyBudget,
) -> Result<MleEstimate> {
    if n_photons < 2 {
        return Err(Error::InvalidArgument(format!(
            "MLE needs at least 2 photons, got {n_photons}"
        )));
    }
    budget.ensure(n_photons)?;
    let n1 = n_photons / 2;
    let n0 = n_photons - n1;
    let counts = [
        sample_polarization(true_state, 0.0, n0, seed.stream(0), budget)?,
        sample_polarization(true_state, FRAC_PI_4, n1, seed.stream(1), budget)?,
    ];
    Ok(MleEstimate {
        k_hat: maximize_likelihood(&counts),
        copies_used: n_photons,
        counts,
    })
}

/// One row of the number-polarization uncertainty table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UncertaintyPoint {
    pub m: u32,
    /// Photon count, taken as the number spread.
    pub delta_n: f64,
    /// Bin width `π/2ᵐ`.
    pub delta_k: f64,
    pub product: f64,
}

/// `ΔN Δk ≈ m π/2ᵐ` for `m` photons resolving `2ᵐ` bins.
pub fn uncertainty_product(m: u32) -> Result<UncertaintyPoint> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be ≥ 1".into()));
    }
    let delta_n = f64::from(m);
    let delta_k = BinGrid::width_for(m);
    Ok(UncertaintyPoint {
        m,
        delta_n,
        delta_k,
        product: delta_n * delta_k,
    })
}

/// Estimators compared by [`complexity_profile`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Strategy {
    /// Idealized half-interval queries; accuracy is the certified bin width.
    Bisection,
    Mle,
    /// Pauli tomography; copies come in multiples of three.
    Tomography,
    ExactOracle,
    /// Repeated noisy oracle calls, combined by their axial mean.
    ProbabilisticOracle {
        sigma: f64,
    },
}

impl Strategy {
    pub fn name(&self) -> &'static str {
        match self {
            Strategy::Bisection => "bisection",
            Strategy::Mle => "mle",
            Strategy::Tomography => "tomography",
            Strategy::ExactOracle => "exact_oracle",
            Strategy::ProbabilisticOracle { .. } => "probabilistic_oracle",
        }
    }

    fn min_shots(&self) -> u64 {
        match self {
            Strategy::Mle => 2,
            _ => 1,
        }
    }

    /// Copies charged for a run with `shots` as its size parameter.
    pub fn copies_for(&self, shots: u64) -> u64 {
        match self {
            Strategy::Tomography => 3 * shots,
            Strategy::ExactOracle => 1,
            Strategy::Bisection => shots.min(MAX_BISECTION_DEPTH as u64),
            _ => shots,
        }
    }

    /// Runs one trial and returns `(error, copies charged)`.
    pub fn run_trial(&self, k: PolarizationAngle, shots: u64, seed: Seed) -> Result<(f64, u64)> {
        let state = PureQubit::linear(k);
        let mut budget = CopyBudget::unlimited(self.name());
        let error = match *self {
            Strategy::Bisection => {
                let depth = u32::try_from(shots).unwrap_or(u32::MAX).min(MAX_BISECTION_DEPTH);
                let mut ask = ideal_half_interval(k);
                let mut charge_err = None;
                let bin = bisection_search(
                    |h| {
                        if let Err(e) = budget.charge(1) {
                            charge_err.get_or_insert(e);
                        }
                        ask(h)
                    },
                    depth,
                )?;
                if let Some(e) = charge_err {
                    return Err(e);
                }
                if bin.contains(k.radians()) {
                    bin.bin_width
                } else {
                    f64::INFINITY
                }
            }
            Strategy::Mle => mle_polarization(&state, shots, seed, &mut budget)?.k_hat.distance(k),
            Strategy::Tomography => pauli_tomography(&state.density(), shots, seed, &mut budget)?
                .polarization_angle()
                .distance(k),
            Strategy::ExactOracle => exact_oracle(&state, &mut budget)?.estimate.distance(k),
            Strategy::ProbabilisticOracle { sigma } => {
                let answers = (0..shots)
                    .map(|i| {
                        probabilistic_oracle(&state, sigma, seed.stream(i), &mut budget).map(|a| a.estimate.radians())
                    })
                    .collect::<Result<Vec<_>>>()?;
                wrapped_distance(axial_mean(&answers), k.radians())
            }
        };
        Ok((error, budget.consumed()))
    }
}

/// Hard ceiling on copies per trial during a profile search.
pub const COPY_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfilePoint {
    pub target: f64,
    /// Smallest copy count meeting the target, or the largest tried when
    /// saturated.
    pub copies: u64,
    /// Median error at `copies`.
    pub achieved: f64,
    /// The target was not reached within [`COPY_CAP`].
    pub saturated: bool,
}

struct Profiler {
    strategy: Strategy,
    angles: Vec<PolarizationAngle>,
    seeds: Vec<Seed>,
    cache: HashMap<u64, f64>,
}

impl Profiler {
    fn median_error(&mut self, shots: u64) -> Result<f64> {
        if let Some(&e) = self.cache.get(&shots) {
            return Ok(e);
        }
        let strategy = self.strategy;
        let expected = strategy.copies_for(shots);
        let errors = self
            .angles
            .par_iter()
            .zip(self.seeds.par_iter())
            .map(|(&k, &seed)| {
                let (err, copies) = strategy.run_trial(k, shots, seed)?;
                debug_assert_eq!(copies, expected);
                Ok(err)
            })
            .collect::<Result<Vec<f64>>>()?;
        let m = median(&errors);
        self.cache.insert(shots, m);
        Ok(m)
    }

    fn search(&mut self, target: f64) -> Result<ProfilePoint> {
        let s = &self.strategy;
        let mut lo = None;
        let mut hi = s.min_shots();
        if matches!(s, Strategy::ExactOracle) {
            let achieved = self.median_error(1)?;
            return Ok(ProfilePoint {
                target,
                copies: 1,
                achieved,
                saturated: achieved > target,
            });
        }
        loop {
            if self.strategy.copies_for(hi) > COPY_CAP {
                let last = lo.unwrap_or(hi);
                let achieved = self.median_error(last)?;
                return Ok(ProfilePoint {
                    target,
                    copies: self.strategy.copies_for(last),
                    achieved,
                    saturated: true,
                });
            }
            if self.median_error(hi)? <= target {
                break;
            }
            lo = Some(hi);
            hi *= 2;
        }
        // invariant: lo fails (or is absent), hi passes
        if let Some(mut lo) = lo {
            while hi - lo > 1 {
                let mid = lo + (hi - lo) / 2;
                if self.median_error(mid)? <= target {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
        }
        Ok(ProfilePoint {
            target,
            copies: self.strategy.copies_for(hi),
            achieved: self.median_error(hi)?,
            saturated: false,
        })
    }
}

/// Minimal copies for each accuracy target, by doubling then binary search.
///
/// True angles are uniform on `[0, π)`; a target is met when the median
/// error over `trials` seeded runs is at most the target.
pub fn complexity_profile(strategy: Strategy, targets: &[f64], trials: u64, seed: Seed) -> Result<Vec<ProfilePoint>> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be ≥ 1".into()));
    }
    if targets.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
        return Err(Error::InvalidArgument("targets must be positive".into()));
    }
    if targets.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidArgument("targets must be strictly decreasing".into()));
    }
    if let Strategy::ProbabilisticOracle { sigma } = strategy {
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidArgument(format!("sigma must be ≥ 0, got {sigma}")));
        }
    }
    let angles = (0..trials)
        .map(|t| PolarizationAngle::new(seed.derive(t, 0).rng().random::<f64>() * PI))
        .collect();
    let seeds = (0..trials).map(|t| seed.derive(t, 1)).collect();
    let mut profiler = Profiler {
        strategy,
        angles,
        seeds,
        cache: HashMap::new(),
    };
    targets.iter().map(|&t| profiler.search(t)).collect()
}

#[cfg(test)]
mod tests {
    use super::Strategy;
    use super::*;
    use crate::stats::std_dev;
    use proptest::prelude::{prop_assert, prop_assert_eq, proptest, ProptestConfig};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_8};

    fn linear(k: f64) -> PureQubit {
        PureQubit::linear(PolarizationAngle::new(k))
    }

    #[test]
    fn tomography_on_pole() {
        let mut budget = CopyBudget::unlimited("tomo");
        let r = pauli_tomography(&PureQubit::horizontal().density(), 1_000_000, Seed(4), &mut budget).unwrap();
        assert!((r.expectation_estimates[2] - 1.0).abs() <= 0.004);
        assert_eq!(r.copies_used, 3_000_000);
        assert_eq!(budget.consumed(), 3_000_000);
        assert!((r.predicted_std - 1e-3).abs() < 1e-15);
    }

    #[test]
    fn tomography_single_shot() {
        let mut budget = CopyBudget::unlimited("tomo");
        let r = pauli_tomography(&DensityMatrix::maximally_mixed(), 1, Seed(8), &mut budget).unwrap();
        assert!(r.expectation_estimates.iter().all(|t| *t == 1.0 || *t == -1.0));
        assert_eq!(r.predicted_std, 1.0);
        // (±1, ±1, ±1) is outside the ball; ρ̂ is built from its projection
        let back = r.rho_hat.pauli_expectations();
        let norm = back.iter().map(|t| t * t).sum::<f64>().sqrt();
        assert!((norm - 1.0).abs() < 1e-12);
        assert!(pauli_tomography(&DensityMatrix::maximally_mixed(), 0, Seed(8), &mut budget).is_err());
    }

    #[test]
    fn tomography_budget_checked_before_sampling() {
        let mut budget = CopyBudget::with_limit("tomo", 5);
        assert!(pauli_tomography(&DensityMatrix::maximally_mixed(), 2, Seed(1), &mut budget).is_err());
        assert_eq!(budget.consumed(), 0);
    }

    #[test]
    fn tomography_spread_matches_inverse_sqrt() {
        let m = 10_000;
        let mut xs = [Vec::new(), Vec::new(), Vec::new()];
        for rep in 0..200 {
            let mut budget = CopyBudget::unlimited("tomo");
            let r = pauli_tomography(
                &DensityMatrix::maximally_mixed(),
                m,
                Seed(31).derive(rep, 0),
                &mut budget,
            )
            .unwrap();
            for (x, e) in xs.iter_mut().zip(r.expectation_estimates) {
                assert!(e.abs() <= 0.04);
                x.push(e);
            }
        }
        for x in &xs {
            let sd = std_dev(x);
            assert!((sd / 0.01 - 1.0).abs() <= 0.1, "{sd}");
        }
    }

    #[test]
    fn bisection_examples() {
        let b = bisection_search(ideal_half_interval(PolarizationAngle::new(FRAC_PI_3)), 1).unwrap();
        assert_eq!(b.bin_index, 0);
        assert_eq!((b.lower(), b.upper()), (0.0, FRAC_PI_2));

        let b = bisection_search(ideal_half_interval(PolarizationAngle::new(FRAC_PI_3)), 3).unwrap();
        assert_eq!(b.bin_index, 2);
        assert_eq!(b.lower(), FRAC_PI_4);
        assert_eq!(b.upper(), 3.0 * FRAC_PI_8);
        assert!(bisection_search(|_| true, 0).is_err());
    }

    #[test]
    fn bisection_uses_exactly_m_queries() {
        let mut queries = 0;
        bisection_search(
            |h| {
                queries += 1;
                h.lo < 1.0
            },
            17,
        )
        .unwrap();
        assert_eq!(queries, 17);
    }

    #[test]
    fn bisection_edge_angles() {
        for m in 1..=MAX_BISECTION_DEPTH {
            let top = PolarizationAngle::new(PI - f64::EPSILON * 2.0);
            let b = bisection_search(ideal_half_interval(top), m).unwrap();
            assert_eq!(b.bin_index, b.bins() - 1);
            assert!(b.contains(top.radians()));
            let b = bisection_search(ideal_half_interval(PolarizationAngle::new(0.0)), m).unwrap();
            assert_eq!(b.bin_index, 0);
            // exact bin edges fall in the upper bin
            let edge = b.upper();
            let b = bisection_search(ideal_half_interval(PolarizationAngle::new(edge)), m).unwrap();
            assert_eq!(b.bin_index, 1);
        }
    }

    #[test]
    fn mle_accuracy_examples() {
        for (i, k) in [0.0, FRAC_PI_4].into_iter().enumerate() {
            let mut budget = CopyBudget::unlimited("mle");
            let est = mle_polarization(&linear(k), 10_000, Seed(50 + i as u64), &mut budget).unwrap();
            assert!(est.k_hat.distance(PolarizationAngle::new(k)) <= 0.05);
            assert_eq!(budget.consumed(), 10_000);
            assert_eq!(est.counts[0].total() + est.counts[1].total(), 10_000);
        }
    }

    #[test]
    fn mle_rejects_too_few_photons() {
        let mut budget = CopyBudget::unlimited("mle");
        assert!(mle_polarization(&linear(0.3), 1, Seed(0), &mut budget).is_err());
        let mut tight = CopyBudget::with_limit("mle", 9);
        assert!(matches!(
            mle_polarization(&linear(0.3), 10, Seed(0), &mut tight),
            Err(Error::BudgetExhausted { .. })
        ));
    }

    #[test]
    fn likelihood_maximum_at_noise_free_counts() {
        // counts proportional to the exact probabilities peak at the truth
        let k: f64 = 1.1;
        let mk = |b: f64| {
            let p = (k - b).cos().powi(2);
            let pass = (p * 1e6).round() as u64;
            OutcomeCounts {
                n_pass: pass,
                n_fail: 1_000_000 - pass,
                basis: crate::measure::MeasurementBasis::Linear(b),
            }
        };
        let counts = [mk(0.0), mk(FRAC_PI_4)];
        assert!(maximize_likelihood(&counts).distance(PolarizationAngle::new(k)) < 1e-5);
    }

    #[test]
    fn uncertainty_products() {
        assert_eq!(uncertainty_product(1).unwrap().product, FRAC_PI_2);
        assert_eq!(uncertainty_product(2).unwrap().product, FRAC_PI_2);
        let p10 = uncertainty_product(10).unwrap();
        assert!((p10.product - 0.030_679_615_757_712_8).abs() < 1e-15);
        assert_eq!(p10.delta_n, 10.0);
        assert!(uncertainty_product(60).unwrap().product < 1e-15);
        assert!(uncertainty_product(0).is_err());
        for m in 2..60 {
            assert!(uncertainty_product(m + 1).unwrap().product < uncertainty_product(m).unwrap().product);
        }
    }

    #[test]
    fn exact_oracle_profile_is_flat() {
        let p = complexity_profile(Strategy::ExactOracle, &[0.1, 0.01, 1e-6], 16, Seed(3)).unwrap();
        assert!(p.iter().all(|pt| pt.copies == 1 && !pt.saturated));
    }

    #[test]
    fn bisection_profile_matches_depth() {
        let targets: Vec<f64> = (1..=12).map(BinGrid::width_for).collect();
        let p = complexity_profile(Strategy::Bisection, &targets, 32, Seed(5)).unwrap();
        for (m, pt) in (1..=12).zip(&p) {
            assert_eq!(pt.copies, m);
        }
    }

    #[test]
    fn mle_profile_monotone() {
        let p = complexity_profile(Strategy::Mle, &[0.1, 0.03, 0.01], 101, Seed(11)).unwrap();
        assert!(p.windows(2).all(|w| w[0].copies <= w[1].copies));
        // n ∝ Δk⁻²: a tenfold tighter target costs roughly a hundredfold
        let ratio = p[2].copies as f64 / p[0].copies as f64;
        assert!((30.0..300.0).contains(&ratio), "{ratio}");
        assert!(p.iter().all(|pt| pt.achieved <= pt.target));
    }

    #[test]
    fn tomography_and_noisy_oracle_profiles() {
        let p = complexity_profile(Strategy::Tomography, &[0.1, 0.03], 51, Seed(12)).unwrap();
        assert!(p.iter().all(|pt| pt.copies % 3 == 0 && !pt.saturated));
        assert!(p[0].copies <= p[1].copies);

        let p = complexity_profile(Strategy::ProbabilisticOracle { sigma: 0.2 }, &[0.1, 0.02], 51, Seed(13)).unwrap();
        assert!(p[0].copies <= p[1].copies && p[1].copies > 1);
        let exact = complexity_profile(Strategy::ProbabilisticOracle { sigma: 0.0 }, &[0.01], 8, Seed(13)).unwrap();
        assert_eq!(exact[0].copies, 1);
    }

    #[test]
    fn profile_argument_checks() {
        assert!(complexity_profile(Strategy::Mle, &[0.01, 0.1], 10, Seed(0)).is_err());
        assert!(complexity_profile(Strategy::Mle, &[0.1], 0, Seed(0)).is_err());
        assert!(complexity_profile(Strategy::Mle, &[-0.1], 3, Seed(0)).is_err());
        assert!(complexity_profile(Strategy::ProbabilisticOracle { sigma: -1.0 }, &[0.1], 3, Seed(0)).is_err());
    }

    #[test]
    fn strategies_charge_what_they_claim() {
        let k = PolarizationAngle::new(0.7);
        for s in [
            Strategy::Bisection,
            Strategy::Mle,
            Strategy::Tomography,
            Strategy::ExactOracle,
            Strategy::ProbabilisticOracle { sigma: 0.1 },
        ] {
            for shots in [2u64, 7, 64] {
                let (_, copies) = s.run_trial(k, shots, Seed(shots)).unwrap();
                assert_eq!(copies, s.copies_for(shots), "{}", s.name());
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn bisection_bin_contains_angle(m in 1u32..=20, u in 0.0..1.0f64) {
            let k = PolarizationAngle::new(u * PI);
            let b = bisection_search(ideal_half_interval(k), m).unwrap();
            prop_assert_eq!(b.bin_width, PI / 2f64.powi(m as i32));
            prop_assert!(b.contains(k.radians()));
            prop_assert!(b.bin_index < b.bins());
        }
    }
}
