//! Universal symmetric 1→2 qubit cloning and tomography on the clones.
//!
//! Only the reduced single-clone channel `ρ ↦ (2/3)ρ + I/6` is modelled.
//! Every clone is a copy of the original input, never a clone of a clone.

use crate::error::{Error, Result};
use crate::estimate::{pauli_tomography, TomographyResult};
use crate::measure::{CopyBudget, Seed};
use crate::qstate::{fidelity, DensityMatrix, PolarizationAngle, PureQubit};

/// Bloch-vector shrinking factor of the optimal universal cloner.
pub const SHRINKING_FACTOR: f64 = 2.0 / 3.0;

/// Pure-input overlap fidelity of each clone.
pub const CLONE_FIDELITY: f64 = 5.0 / 6.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CloneOutput {
    pub clone_a: DensityMatrix,
    pub clone_b: DensityMatrix,
    /// `tr(ρ_in ρ_out)`, which is `⟨ψ|ρ_out|ψ⟩` for a pure input.
    pub input_overlap_fidelity: f64,
    /// Uhlmann `tr √(√ρ_in ρ_out √ρ_in)`.
    pub trace_fidelity: f64,
}

/// Single-clone channel `(2/3)ρ + I/6`.
pub fn clone_channel(rho: &DensityMatrix) -> DensityMatrix {
    rho.mix(&DensityMatrix::maximally_mixed(), SHRINKING_FACTOR)
}

pub fn bh_clone(rho_in: &DensityMatrix) -> CloneOutput {
    let out = clone_channel(rho_in);
    CloneOutput {
        clone_a: out,
        clone_b: out,
        input_overlap_fidelity: rho_in.trace_product(&out),
        trace_fidelity: fidelity(rho_in, &out),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CloneTomography {
    /// Tomography of the shrunken clone state.
    pub tomography: TomographyResult,
    /// Clone Bloch vector divided by the shrinking factor.
    pub deshrunk: [f64; 3],
    pub clones_used: u64,
    /// Originals charged to the caller's budget; always 1.
    pub originals_used: u64,
}

impl CloneTomography {
    pub fn polarization_angle(&self) -> PolarizationAngle {
        PolarizationAngle::new(0.5 * self.deshrunk[0].atan2(self.deshrunk[2]))
    }
}

/// Clones one copy of `true_state` `n_clones` times and runs Pauli
/// tomography on the clones.
///
/// Only the single original is charged to `budget`; clones are counted in
/// [`CloneTomography::clones_used`].
pub fn clone_then_tomograph(
    true_state: &PureQubit,
    n_clones: u64,
    m_per_axis: u64,
    seed: Seed,
    budget: &mut CopyBudget,
) -> Result<CloneTomography> {
    let needed = m_per_axis
        .checked_mul(3)
        .ok_or_else(|| Error::InvalidArgument("m_per_axis too large".into()))?;
    if n_clones < needed {
        return Err(Error::InvalidArgument(format!(
            "{n_clones} clones cannot supply {needed} tomography shots"
        )));
    }
    budget.charge(1)?;
    let clone_state = clone_channel(&true_state.density());
    let mut clone_budget = CopyBudget::with_limit("clones", n_clones);
    let tomography = pauli_tomography(&clone_state, m_per_axis, seed, &mut clone_budget)?;
    let deshrunk = tomography.expectation_estimates.map(|t| t / SHRINKING_FACTOR);
    Ok(CloneTomography {
        tomography,
        deshrunk,
        clones_used: clone_budget.consumed(),
        originals_used: 1,
    })
}
