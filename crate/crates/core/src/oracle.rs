//! Measurement oracles, the m-copy verifier and the unitary query oracle.

use std::collections::{BTreeSet, HashMap};
use std::f64::consts::TAU;

use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::measure::{bernoulli_count, born_probability, CopyBudget, Seed};
use crate::qstate::{PolarizationAngle, PureQubit};

/// An oracle's answer. Oracles always charge exactly one copy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleAnswer {
    pub estimate: PolarizationAngle,
    pub copies_charged: u64,
    pub exact: bool,
}

/// Returns the true polarization angle from a single copy.
pub fn exact_oracle(true_state: &PureQubit, budget: &mut CopyBudget) -> Result<OracleAnswer> {
    budget.charge(1)?;
    Ok(OracleAnswer {
        estimate: true_state.polarization_angle(),
        copies_charged: 1,
        exact: true,
    })
}

/// Returns the true angle plus Gaussian noise of width `sigma`, from one copy.
///
/// `sigma = 0` reproduces [`exact_oracle`] exactly.
pub fn probabilistic_oracle(
    true_state: &PureQubit,
    sigma: f64,
    seed: Seed,
    budget: &mut CopyBudget,
) -> Result<OracleAnswer> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidArgument(format!("sigma must be ≥ 0, got {sigma}")));
    }
    if sigma == 0.0 {
        return exact_oracle(true_state, budget);
    }
    budget.charge(1)?;
    let noise = Normal::new(0.0, sigma)
        .map_err(|e| Error::InvalidArgument(e.to_string()))?
        .sample(&mut seed.rng());
    Ok(OracleAnswer {
        estimate: PolarizationAngle::new(true_state.polarization_angle().radians() + noise),
        copies_charged: 1,
        exact: false,
    })
}

/// How the verifier spends its copies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VerifyMode {
    /// All `m` copies are measured up front.
    #[default]
    Batch,
    /// Copies are measured one at a time; the first failure stops the run.
    Sequential,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Verification {
    pub accepted: bool,
    /// `1 − 2⁻ᵐ`: rejection probability for a claim off by π/4.
    pub confidence: f64,
    pub copies_used: u64,
}

/// Probability that a claim off by `epsilon` survives all `m` copies,
/// `cos^{2m}(ε)`.
pub fn false_accept_probability(epsilon: f64, m: u32) -> f64 {
    epsilon.cos().powi(2).powi(m as i32)
}

/// Checks a claimed angle by measuring `m` copies in the claimed basis.
///
/// The claim is accepted iff every copy passes the analyzer.
pub fn verify_claim(
    true_state: &PureQubit,
    claimed: PolarizationAngle,
    m: u32,
    mode: VerifyMode,
    seed: Seed,
    budget: &mut CopyBudget,
) -> Result<Verification> {
    if m == 0 {
        return Err(Error::InvalidArgument("verifier needs m ≥ 1 copies".into()));
    }
    let p = born_probability(true_state, claimed.radians());
    let confidence = 1.0 - 0.5f64.powi(m as i32);
    let (accepted, copies_used) = match mode {
        VerifyMode::Batch => {
            budget.charge(u64::from(m))?;
            (bernoulli_count(p, u64::from(m), seed) == u64::from(m), u64::from(m))
        }
        VerifyMode::Sequential => {
            budget.ensure(u64::from(m))?;
            let mut used = 0;
            let mut passed = true;
            for copy in 0..u64::from(m) {
                budget.charge(1)?;
                used += 1;
                if bernoulli_count(p, 1, seed.stream(copy)) == 0 {
                    passed = false;
                    break;
                }
            }
            (passed, used)
        }
    };
    Ok(Verification {
        accepted,
        confidence,
        copies_used,
    })
}

/// A computational-basis register `|x, y⟩` with an accumulated global phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QueryState {
    /// Query bits, least significant bit first.
    pub x: u64,
    pub len: u32,
    pub y: u8,
    /// Phase in `[0, 2π)`.
    pub phase: f64,
}

impl QueryState {
    pub fn new(x: u64, len: u32, y: u8, phase: f64) -> Result<Self> {
        if len > 64 || (len < 64 && x >> len != 0) {
            return Err(Error::InvalidArgument(format!("x = {x:#b} does not fit in {len} bits")));
        }
        if y > 1 {
            return Err(Error::InvalidArgument(format!("answer bit must be 0 or 1, got {y}")));
        }
        Ok(QueryState {
            x,
            len,
            y,
            phase: phase.rem_euclid(TAU),
        })
    }

    /// Parses a bit string such as `"101"`, most significant bit first.
    pub fn from_bits(bits: &str, y: u8) -> Result<Self> {
        let x = parse_bits(bits)?;
        Self::new(x, bits.len() as u32, y, 0.0)
    }

    /// Basis-state index `2x + y` in the `2ⁿ⁺¹`-dimensional register.
    pub fn index(&self) -> u64 {
        (self.x << 1) | u64::from(self.y)
    }
}

fn parse_bits(bits: &str) -> Result<u64> {
    if bits.len() > 64 {
        return Err(Error::InvalidArgument("bit strings are limited to 64 bits".into()));
    }
    bits.chars().try_fold(0u64, |acc, ch| match ch {
        '0' => Ok(acc << 1),
        '1' => Ok((acc << 1) | 1),
        other => Err(Error::InvalidArgument(format!("invalid bit {other:?}"))),
    })
}

/// Phases `φ_{x,y}` picked up by each basis state; missing entries are zero.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PhaseTable(HashMap<(u64, u8), f64>);

impl PhaseTable {
    pub fn zero() -> Self {
        PhaseTable::default()
    }

    pub fn set(&mut self, x: u64, y: u8, phase: f64) {
        self.0.insert((x, y), phase);
    }

    pub fn get(&self, x: u64, y: u8) -> f64 {
        self.0.get(&(x, y)).copied().unwrap_or(0.0)
    }
}

/// Membership oracle for a set `X` of equal-length bit strings.
#[derive(Debug, Clone, PartialEq)]
pub struct MemberSet {
    len: u32,
    members: BTreeSet<u64>,
}

impl MemberSet {
    pub fn new(len: u32, members: impl IntoIterator<Item = u64>) -> Result<Self> {
        let members: BTreeSet<u64> = members.into_iter().collect();
        if len > 64 {
            return Err(Error::InvalidArgument("bit strings are limited to 64 bits".into()));
        }
        if let Some(&bad) = members.iter().find(|&&x| len < 64 && x >> len != 0) {
            return Err(Error::InvalidArgument(format!("{bad:#b} longer than {len} bits")));
        }
        Ok(MemberSet { len, members })
    }

    /// Builds a set from bit strings that must all share one length.
    pub fn from_bits<'a>(strings: impl IntoIterator<Item = &'a str>) -> Result<Self> {
        let mut len = None;
        let mut members = Vec::new();
        for s in strings {
            match len {
                None => len = Some(s.len() as u32),
                Some(l) if l as usize != s.len() => {
                    return Err(Error::DimensionMismatch {
                        expected: l as usize,
                        got: s.len(),
                    })
                }
                _ => {}
            }
            members.push(parse_bits(s)?);
        }
        Self::new(len.unwrap_or(0), members)
    }

    pub fn len(&self) -> u32 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// `f(x) = 1` iff `x ∈ X`.
    pub fn contains(&self, x: u64) -> bool {
        self.members.contains(&x)
    }
}

/// `U|x, y⟩ = e^{iφ_{x,y}} |x, y ⊕ f(x)⟩`.
pub fn query_oracle_apply(set: &MemberSet, input: QueryState, phases: &PhaseTable) -> Result<QueryState> {
    if input.len != set.len {
        return Err(Error::DimensionMismatch {
            expected: set.len as usize,
            got: input.len as usize,
        });
    }
    let fx = u8::from(set.contains(input.x));
    Ok(QueryState {
        x: input.x,
        len: input.len,
        y: input.y ^ fx,
        phase: (input.phase + phases.get(input.x, input.y)).rem_euclid(TAU),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::CopyBudget;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI};

    fn linear(k: f64) -> PureQubit {
        PureQubit::linear(PolarizationAngle::new(k))
    }

    #[test]
    fn exact_oracle_returns_truth_for_one_copy() {
        let mut budget = CopyBudget::unlimited("oracle");
        let ans = exact_oracle(&linear(FRAC_PI_3), &mut budget).unwrap();
        assert!((ans.estimate.radians() - FRAC_PI_3).abs() < 1e-12);
        assert_eq!(ans.copies_charged, 1);
        assert!(ans.exact);
        let ans = exact_oracle(&linear(0.0), &mut budget).unwrap();
        assert!(ans.estimate.distance(PolarizationAngle::new(0.0)) < 1e-12);
        assert_eq!(budget.consumed(), 2);
    }

    #[test]
    fn oracle_respects_budget() {
        let mut budget = CopyBudget::with_limit("oracle", 1);
        exact_oracle(&linear(0.1), &mut budget).unwrap();
        assert!(matches!(
            exact_oracle(&linear(0.1), &mut budget),
            Err(Error::BudgetExhausted { .. })
        ));
    }

    #[test]
    fn zero_sigma_is_exact() {
        let mut budget = CopyBudget::unlimited("p");
        let k = PI / 5.0;
        let ans = probabilistic_oracle(&linear(k), 0.0, Seed(1), &mut budget).unwrap();
        assert_eq!(ans, exact_oracle(&linear(k), &mut CopyBudget::unlimited("e")).unwrap());
        assert!(probabilistic_oracle(&linear(k), -0.1, Seed(1), &mut budget).is_err());
    }

    #[test]
    fn probabilistic_oracle_spread() {
        let mut budget = CopyBudget::unlimited("p");
        let k = FRAC_PI_2;
        let n = 10_000;
        let errs: Vec<f64> = (0..n)
            .map(|t| {
                let a = probabilistic_oracle(&linear(k), 0.1, Seed(9).derive(t, 0), &mut budget).unwrap();
                assert_eq!(a.copies_charged, 1);
                crate::qstate::wrapped_difference(a.estimate.radians(), k)
            })
            .collect();
        let mean = errs.iter().sum::<f64>() / n as f64;
        let sd = (errs.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt();
        assert!((sd - 0.1).abs() <= 0.005, "{sd}");
        assert_eq!(budget.consumed(), n);
    }

    #[test]
    fn correct_claims_always_accepted() {
        for mode in [VerifyMode::Batch, VerifyMode::Sequential] {
            let mut budget = CopyBudget::unlimited("v");
            for t in 0..200u64 {
                let k = t as f64 * 0.0157;
                let v = verify_claim(&linear(k), PolarizationAngle::new(k), 12, mode, Seed(t), &mut budget).unwrap();
                assert!(v.accepted);
                assert_eq!(v.copies_used, 12);
            }
        }
    }

    #[test]
    fn orthogonal_claim_always_rejected() {
        let mut budget = CopyBudget::unlimited("v");
        for t in 0..100 {
            let v = verify_claim(
                &linear(0.3),
                PolarizationAngle::new(0.3 + FRAC_PI_2),
                1,
                VerifyMode::Batch,
                Seed(t),
                &mut budget,
            )
            .unwrap();
            assert!(!v.accepted);
        }
    }

    #[test]
    fn confidence_and_zero_m() {
        let mut budget = CopyBudget::unlimited("v");
        let v = verify_claim(
            &linear(0.0),
            PolarizationAngle::new(0.0),
            10,
            VerifyMode::Batch,
            Seed(0),
            &mut budget,
        )
        .unwrap();
        assert_eq!(v.confidence, 1.0 - 1.0 / 1024.0);
        assert!(verify_claim(
            &linear(0.0),
            PolarizationAngle::new(0.0),
            0,
            VerifyMode::Batch,
            Seed(0),
            &mut budget
        )
        .is_err());
    }

    #[test]
    fn sequential_mode_stops_early() {
        let mut budget = CopyBudget::unlimited("v");
        let v = verify_claim(
            &linear(0.0),
            PolarizationAngle::new(FRAC_PI_2),
            8,
            VerifyMode::Sequential,
            Seed(2),
            &mut budget,
        )
        .unwrap();
        assert!(!v.accepted);
        assert_eq!(v.copies_used, 1);
        assert_eq!(budget.consumed(), 1);
    }

    #[test]
    fn false_accept_matches_cos_power() {
        // ε ∈ {π/8, π/4, 3π/8}, m ∈ 1..=8, within 4σ
        let trials = 20_000u64;
        for (ei, eps) in [PI / 8.0, FRAC_PI_4, 3.0 * PI / 8.0].into_iter().enumerate() {
            for m in 1..=8u32 {
                let mut budget = CopyBudget::unlimited("v");
                let accepted = (0..trials)
                    .filter(|&t| {
                        let seed = Seed(1000 + ei as u64 * 16 + m as u64).derive(t, 0);
                        verify_claim(
                            &linear(0.2),
                            PolarizationAngle::new(0.2 + eps),
                            m,
                            VerifyMode::Batch,
                            seed,
                            &mut budget,
                        )
                        .unwrap()
                        .accepted
                    })
                    .count();
                let p = false_accept_probability(eps, m);
                let rate = accepted as f64 / trials as f64;
                let sd = (p * (1.0 - p) / trials as f64).sqrt();
                assert!(
                    (rate - p).abs() <= 4.0 * sd + 1e-12,
                    "eps={eps} m={m} rate={rate} p={p}"
                );
                assert_eq!(budget.consumed(), trials * m as u64);
            }
        }
    }

    #[test]
    fn query_oracle_examples() {
        let set = MemberSet::from_bits(["101"]).unwrap();
        let zero = PhaseTable::zero();
        let out = query_oracle_apply(&set, QueryState::from_bits("101", 0).unwrap(), &zero).unwrap();
        assert_eq!((out.x, out.y, out.phase), (0b101, 1, 0.0));
        let out = query_oracle_apply(&set, QueryState::from_bits("011", 0).unwrap(), &zero).unwrap();
        assert_eq!((out.x, out.y, out.phase), (0b011, 0, 0.0));
        let bad = QueryState::from_bits("0110", 0).unwrap();
        assert!(matches!(
            query_oracle_apply(&set, bad, &zero),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn query_state_validation() {
        assert!(QueryState::new(0b100, 2, 0, 0.0).is_err());
        assert!(QueryState::new(0, 2, 2, 0.0).is_err());
        assert!(QueryState::from_bits("10x", 0).is_err());
        assert!(MemberSet::from_bits(["10", "101"]).is_err());
        let s = QueryState::new(1, 3, 1, -0.5).unwrap();
        assert!((0.0..TAU).contains(&s.phase));
    }

    #[test]
    fn phases_accumulate() {
        let set = MemberSet::from_bits(["11"]).unwrap();
        let mut phases = PhaseTable::zero();
        phases.set(0b11, 0, 1.0);
        phases.set(0b11, 1, 2.0);
        let once = query_oracle_apply(&set, QueryState::from_bits("11", 0).unwrap(), &phases).unwrap();
        assert_eq!((once.y, once.phase), (1, 1.0));
        let twice = query_oracle_apply(&set, once, &phases).unwrap();
        assert_eq!((twice.y, twice.phase), (0, 3.0));
    }

    #[test]
    fn induced_map_is_unitary_with_random_phases() {
        use rand::Rng;
        let n = 4u32;
        let mut rng = Seed(77).rng();
        let members: Vec<u64> = (0..1u64 << n).filter(|_| rng.random::<bool>()).collect();
        let set = MemberSet::new(n, members).unwrap();
        let mut phases = PhaseTable::zero();
        for x in 0..1u64 << n {
            for y in 0..2u8 {
                phases.set(x, y, rng.random::<f64>() * TAU);
            }
        }
        let dim = 1usize << (n + 1);
        let mut u = vec![vec![num_complex::Complex64::new(0.0, 0.0); dim]; dim];
        for x in 0..1u64 << n {
            for y in 0..2u8 {
                let input = QueryState::new(x, n, y, 0.0).unwrap();
                let out = query_oracle_apply(&set, input, &phases).unwrap();
                u[out.index() as usize][input.index() as usize] = num_complex::Complex64::from_polar(1.0, out.phase);
            }
        }
        for a in 0..dim {
            for b in 0..dim {
                let dot: num_complex::Complex64 = (0..dim).map(|r| u[r][a].conj() * u[r][b]).sum();
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((dot.re - want).abs() < 1e-12 && dot.im.abs() < 1e-12);
            }
        }
    }
}
