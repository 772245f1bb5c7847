//! Homodyne tomography: quadrature sinograms and Wigner reconstruction.
//!
//! Quadratures follow `x_θ = (a e^{−iθ} + a† e^{iθ})/√2`, so a coherent
//! state `|α0⟩` gives `x_θ ~ N(√2·Re(α0 e^{−iθ}), ½)` and its Wigner function
//! is a unit-area Gaussian of variance ½ centred at `√2·(Re α0, Im α0)`.
//!
//! Reconstruction is band-limited filtered back-projection over θ ∈ [0, π):
//!
//! ```text
//! W(q, p) = 1/(4π²) · Δθ Δx · Σⱼ Σᵢ pr(xᵢ, θⱼ) K(q cos θⱼ + p sin θⱼ − xᵢ)
//! K(y)    = ∫_{−k_c}^{k_c} |k| e^{iky} dk = 2(cos k_c y + k_c y sin k_c y − 1)/y²
//! ```
//!
//! As `k_c → ∞` the kernel tends to the principal-value kernel `−2/y²`.

use std::f64::consts::{PI, SQRT_2};

use ndarray::Array2;
use num_complex::Complex64 as C64;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use statrs::function::erf::erf;

use crate::error::{Error, Result};
use crate::measure::Seed;

/// Default filter cutoff; adequate for Gaussian states with `|α0| ≤ 2`.
pub const DEFAULT_CUTOFF: f64 = 5.0;
/// Default number of histogram bins per angle.
pub const DEFAULT_X_BINS: usize = 240;
/// Margin added to `|α0|√2` for the default histogram range.
pub const X_RANGE_MARGIN: f64 = 5.0;
/// Margin added to `|α0|√2` for the default reconstruction grid.
pub const GRID_MARGIN: f64 = 4.0;
/// Vacuum quadrature variance.
pub const VACUUM_VARIANCE: f64 = 0.5;

/// Below this `|k_c y|` the kernel is evaluated from its Taylor series.
const SERIES_CUTOFF: f64 = 1e-3;

/// Band-limited ramp kernel `2(cos k_c y + k_c y sin k_c y − 1)/y²`.
pub fn radon_kernel(cutoff: f64, y: f64) -> f64 {
    let u = cutoff * y;
    if u.abs() < SERIES_CUTOFF {
        let u2 = u * u;
        cutoff * cutoff * (1.0 - u2 / 4.0 + u2 * u2 / 72.0)
    } else {
        let (s, c) = u.sin_cos();
        2.0 * (c + u * s - 1.0) / (y * y)
    }
}

/// One measured quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSample {
    pub x: f64,
    /// Local-oscillator phase in `[0, π)`.
    pub theta: f64,
}

/// Mean of `x_θ` for a coherent state.
pub fn quadrature_mean(alpha0: C64, theta: f64) -> f64 {
    SQRT_2 * (alpha0 * C64::from_polar(1.0, -theta)).re
}

/// Histogram layout along `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistogramSpec {
    pub x_bins: usize,
    pub x_range: (f64, f64),
}

impl HistogramSpec {
    /// `±(|α0|√2 + 5)` with 240 bins.
    pub fn for_coherent(alpha0: C64) -> Self {
        let half = alpha0.norm() * SQRT_2 + X_RANGE_MARGIN;
        HistogramSpec {
            x_bins: DEFAULT_X_BINS,
            x_range: (-half, half),
        }
    }

    fn validate(&self) -> Result<()> {
        let (lo, hi) = self.x_range;
        if self.x_bins == 0 || !(lo.is_finite() && hi.is_finite() && hi > lo) {
            return Err(Error::InvalidArgument(format!(
                "invalid histogram: {} bins over ({lo}, {hi})",
                self.x_bins
            )));
        }
        Ok(())
    }

    fn bin_of(&self, x: f64) -> Option<usize> {
        let (lo, hi) = self.x_range;
        if !(lo..hi).contains(&x) {
            return None;
        }
        let i = ((x - lo) / (hi - lo) * self.x_bins as f64) as usize;
        Some(i.min(self.x_bins - 1))
    }
}

/// Quadrature histograms `pr(x, θⱼ)` at `θⱼ = jπ/T`.
#[derive(Debug, Clone, PartialEq)]
pub struct Sinogram {
    theta_bins: usize,
    spec: HistogramSpec,
    /// `counts[[j, i]]`: weight of bin `i` at angle `j`. Sample counts for
    /// measured sinograms, exact bin probabilities for analytic ones.
    counts: Array2<f64>,
    /// Samples that fell outside the histogram range.
    dropped: u64,
}

impl Sinogram {
    pub fn new(theta_bins: usize, spec: HistogramSpec, counts: Array2<f64>) -> Result<Self> {
        spec.validate()?;
        if counts.dim() != (theta_bins, spec.x_bins) {
            return Err(Error::DimensionMismatch {
                expected: theta_bins * spec.x_bins,
                got: counts.len(),
            });
        }
        if counts.iter().any(|c| !(c.is_finite() && *c >= 0.0)) {
            return Err(Error::InvalidArgument("counts must be finite and non-negative".into()));
        }
        Ok(Sinogram {
            theta_bins,
            spec,
            counts,
            dropped: 0,
        })
    }

    pub fn theta_bins(&self) -> usize {
        self.theta_bins
    }

    pub fn x_bins(&self) -> usize {
        self.spec.x_bins
    }

    pub fn x_range(&self) -> (f64, f64) {
        self.spec.x_range
    }

    pub fn counts(&self) -> &Array2<f64> {
        &self.counts
    }

    pub fn dropped(&self) -> u64 {
        self.dropped
    }

    pub fn theta(&self, j: usize) -> f64 {
        j as f64 * PI / self.theta_bins as f64
    }

    pub fn bin_width(&self) -> f64 {
        let (lo, hi) = self.spec.x_range;
        (hi - lo) / self.spec.x_bins as f64
    }

    pub fn bin_center(&self, i: usize) -> f64 {
        self.spec.x_range.0 + (i as f64 + 0.5) * self.bin_width()
    }

    pub fn row_total(&self, j: usize) -> f64 {
        self.counts.row(j).sum()
    }

    /// Rows divided by their totals and the bin width; empty rows stay zero.
    pub fn densities(&self) -> Array2<f64> {
        let dx = self.bin_width();
        let mut out = self.counts.clone();
        for mut row in out.rows_mut() {
            let total: f64 = row.sum();
            if total > 0.0 {
                row.mapv_inplace(|c| c / (total * dx));
            }
        }
        out
    }

    /// Histogram estimate of the mean quadrature at angle `j`.
    pub fn row_mean(&self, j: usize) -> f64 {
        let total = self.row_total(j);
        self.counts
            .row(j)
            .iter()
            .enumerate()
            .map(|(i, c)| c * self.bin_center(i))
            .sum::<f64>()
            / total
    }

    pub fn is_empty(&self) -> bool {
        self.theta_bins == 0 || self.counts.iter().all(|&c| c == 0.0)
    }
}

/// Simulated homodyne data for a coherent state on the default histogram.
pub fn sample_quadratures(alpha0: C64, n_per_angle: u64, theta_bins: usize, seed: Seed) -> Result<Sinogram> {
    sample_quadratures_with(
        alpha0,
        n_per_angle,
        theta_bins,
        HistogramSpec::for_coherent(alpha0),
        seed,
    )
}

/// Simulated homodyne data for a coherent state.
///
/// Each angle draws from its own seeded stream, so rows are independent of
/// one another and of evaluation order.
pub fn sample_quadratures_with(
    alpha0: C64,
    n_per_angle: u64,
    theta_bins: usize,
    spec: HistogramSpec,
    seed: Seed,
) -> Result<Sinogram> {
    if n_per_angle == 0 || theta_bins == 0 {
        return Err(Error::InvalidArgument(
            "need at least one angle and one sample per angle".into(),
        ));
    }
    spec.validate()?;
    let rows: Vec<(Vec<f64>, u64)> = (0..theta_bins)
        .into_par_iter()
        .map(|j| {
            let theta = j as f64 * PI / theta_bins as f64;
            let normal = Normal::new(quadrature_mean(alpha0, theta), VACUUM_VARIANCE.sqrt())
                .expect("finite mean and positive width");
            let mut rng = seed.stream(j as u64).rng();
            let mut hist = vec![0.0; spec.x_bins];
            let mut dropped = 0;
            for _ in 0..n_per_angle {
                match spec.bin_of(normal.sample(&mut rng)) {
                    Some(i) => hist[i] += 1.0,
                    None => dropped += 1,
                }
            }
            (hist, dropped)
        })
        .collect();
    let mut counts = Array2::zeros((theta_bins, spec.x_bins));
    let mut dropped = 0;
    for (j, (hist, d)) in rows.into_iter().enumerate() {
        counts.row_mut(j).assign(&ndarray::Array1::from(hist));
        dropped += d;
    }
    let mut sino = Sinogram::new(theta_bins, spec, counts)?;
    sino.dropped = dropped;
    Ok(sino)
}

/// Noise-free sinogram: exact Gaussian probability mass of every bin.
pub fn exact_coherent_sinogram(alpha0: C64, theta_bins: usize, spec: HistogramSpec) -> Result<Sinogram> {
    if theta_bins == 0 {
        return Err(Error::InvalidArgument("need at least one angle".into()));
    }
    spec.validate()?;
    let (lo, hi) = spec.x_range;
    let dx = (hi - lo) / spec.x_bins as f64;
    let mut counts = Array2::zeros((theta_bins, spec.x_bins));
    for j in 0..theta_bins {
        let mean = quadrature_mean(alpha0, j as f64 * PI / theta_bins as f64);
        // variance ½ ⇒ CDF(x) = (1 + erf(x − mean))/2
        let cdf = |x: f64| 0.5 * (1.0 + erf(x - mean));
        for i in 0..spec.x_bins {
            let a = lo + i as f64 * dx;
            counts[[j, i]] = cdf(a + dx) - cdf(a);
        }
    }
    Sinogram::new(theta_bins, spec, counts)
}

/// Uniform reconstruction grid over `[q_min, q_max] × [p_min, p_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub q_min: f64,
    pub q_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub step: f64,
}

impl GridSpec {
    pub fn square(half_width: f64, step: f64) -> Self {
        GridSpec {
            q_min: -half_width,
            q_max: half_width,
            p_min: -half_width,
            p_max: half_width,
            step,
        }
    }

    /// `±(|α0|√2 + 4)` in both axes.
    pub fn for_coherent(alpha0: C64, step: f64) -> Self {
        Self::square(alpha0.norm() * SQRT_2 + GRID_MARGIN, step)
    }

    fn validate(&self) -> Result<()> {
        let ok = self.step.is_finite()
            && self.step > 0.0
            && self.q_max >= self.q_min
            && self.p_max >= self.p_min
            && [self.q_min, self.q_max, self.p_min, self.p_max]
                .iter()
                .all(|v| v.is_finite());
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("invalid grid {self:?}")))
        }
    }

    fn axis(lo: f64, hi: f64, step: f64) -> Vec<f64> {
        let n = ((hi - lo) / step).round() as usize + 1;
        (0..n).map(|i| lo + i as f64 * step).collect()
    }

    pub fn q_axis(&self) -> Vec<f64> {
        Self::axis(self.q_min, self.q_max, self.step)
    }

    pub fn p_axis(&self) -> Vec<f64> {
        Self::axis(self.p_min, self.p_max, self.step)
    }
}

/// Wigner function sampled on a grid; `values[[iq, ip]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid {
    pub q_axis: Vec<f64>,
    pub p_axis: Vec<f64>,
    pub values: Array2<f64>,
    pub cell_area: f64,
}

impl WignerGrid {
    fn from_fn(grid: &GridSpec, f: impl Fn(f64, f64) -> f64 + Sync) -> Result<Self> {
        grid.validate()?;
        let q_axis = grid.q_axis();
        let p_axis = grid.p_axis();
        let rows: Vec<Vec<f64>> = q_axis
            .par_iter()
            .map(|&q| p_axis.iter().map(|&p| f(q, p)).collect())
            .collect();
        let values = Array2::from_shape_fn((q_axis.len(), p_axis.len()), |(i, j)| rows[i][j]);
        Ok(WignerGrid {
            q_axis,
            p_axis,
            values,
            cell_area: grid.step * grid.step,
        })
    }

    /// `Σ W · cell_area`.
    pub fn integral(&self) -> f64 {
        self.values.sum() * self.cell_area
    }

    /// Largest pointwise difference against a grid of the same shape.
    pub fn max_abs_diff(&self, other: &WignerGrid) -> Result<f64> {
        if self.values.dim() != other.values.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.values.len(),
                got: other.values.len(),
            });
        }
        Ok(self
            .values
            .iter()
            .zip(other.values.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    /// Grid coordinates of the largest value.
    pub fn peak(&self) -> (f64, f64) {
        let mut best = ((0, 0), f64::NEG_INFINITY);
        for ((i, j), &v) in self.values.indexed_iter() {
            if v > best.1 {
                best = ((i, j), v);
            }
        }
        (self.q_axis[best.0 .0], self.p_axis[best.0 .1])
    }

    /// Bilinear interpolation; zero outside the grid.
    pub fn interpolate(&self, q: f64, p: f64) -> f64 {
        let locate = |axis: &[f64], v: f64| -> Option<(usize, f64)> {
            let (lo, hi) = (axis[0], *axis.last()?);
            if axis.len() < 2 || v < lo || v > hi {
                return None;
            }
            let step = (hi - lo) / (axis.len() - 1) as f64;
            let i = (((v - lo) / step) as usize).min(axis.len() - 2);
            Some((i, (v - axis[i]) / step))
        };
        let (Some((i, tq)), Some((j, tp))) = (locate(&self.q_axis, q), locate(&self.p_axis, p)) else {
            return 0.0;
        };
        let v = &self.values;
        (1.0 - tq) * (1.0 - tp) * v[[i, j]]
            + tq * (1.0 - tp) * v[[i + 1, j]]
            + (1.0 - tq) * tp * v[[i, j + 1]]
            + tq * tp * v[[i + 1, j + 1]]
    }
}

/// Phase-space centre `(q̄, p̄) = √2·(Re α0, Im α0)` of a coherent state.
pub fn coherent_center(alpha0: C64) -> (f64, f64) {
    (SQRT_2 * alpha0.re, SQRT_2 * alpha0.im)
}

/// `W(q, p) = exp(−(q − q̄)² − (p − p̄)²)/π`.
pub fn analytic_wigner_coherent(alpha0: C64, grid: &GridSpec) -> Result<WignerGrid> {
    let (qc, pc) = coherent_center(alpha0);
    WignerGrid::from_fn(grid, |q, p| (-(q - qc).powi(2) - (p - pc).powi(2)).exp() / PI)
}

/// Filtered back-projection of a sinogram onto a grid.
pub fn inverse_radon(sinogram: &Sinogram, cutoff: f64, grid: &GridSpec) -> Result<WignerGrid> {
    if !(cutoff.is_finite() && cutoff > 0.0) {
        return Err(Error::InvalidArgument(format!("cutoff must be positive, got {cutoff}")));
    }
    if sinogram.is_empty() {
        return Err(Error::InvalidArgument("empty sinogram".into()));
    }
    let dx = sinogram.bin_width();
    let d_theta = PI / sinogram.theta_bins() as f64;
    // pr(xᵢ, θⱼ)·Δx: probability mass per bin
    let mass = sinogram.densities().mapv(|d| d * dx);
    let centers: Vec<f64> = (0..sinogram.x_bins()).map(|i| sinogram.bin_center(i)).collect();
    let angles: Vec<(f64, f64)> = (0..sinogram.theta_bins())
        .map(|j| sinogram.theta(j).sin_cos())
        .collect();
    let prefactor = d_theta / (4.0 * PI * PI);
    WignerGrid::from_fn(grid, |q, p| {
        let mut acc = 0.0;
        for (j, &(s, c)) in angles.iter().enumerate() {
            let proj = q * c + p * s;
            let row = mass.row(j);
            for (m, x) in row.iter().zip(&centers) {
                if *m != 0.0 {
                    acc += m * radon_kernel(cutoff, proj - x);
                }
            }
        }
        prefactor * acc
    })
}

/// Rotates `(q, p)` by `angle` counter-clockwise.
pub fn rotate(q: f64, p: f64, angle: f64) -> (f64, f64) {
    let (s, c) = angle.sin_cos();
    (c * q - s * p, s * q + c * p)
}
