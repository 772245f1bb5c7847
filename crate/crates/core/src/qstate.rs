//! Single-qubit polarization algebra.
//!
//! Basis convention: `|H⟩ = (1, 0)`, `|V⟩ = (0, 1)`, so that `Z|H⟩ = +|H⟩`.
//! The single-photon Stokes operators are the Pauli matrices themselves
//! (`S₀ = I`, `Sᵢ = σᵢ`).

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// A 2×2 complex matrix, row-major.
pub type Mat2 = [[C64; 2]; 2];

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

pub const IDENTITY: Mat2 = [[ONE, ZERO], [ZERO, ONE]];
pub const PAULI_X: Mat2 = [[ZERO, ONE], [ONE, ZERO]];
pub const PAULI_Y: Mat2 = [[ZERO, C64::new(0.0, -1.0)], [I, ZERO]];
pub const PAULI_Z: Mat2 = [[ONE, ZERO], [ZERO, C64::new(-1.0, 0.0)]];

/// Stokes operators `[S₀, S₁, S₂, S₃]` in the single-photon representation.
///
/// `S₁` is the H/V difference (σ_z in this basis), `S₂` the diagonal
/// difference (σ_x) and `S₃` the circular difference (σ_y), matching the
/// expectation values returned by [`stokes_parameters`].
pub const STOKES_OPERATORS: [Mat2; 4] = [IDENTITY, PAULI_Z, PAULI_X, PAULI_Y];

/// Pauli matrices `[σ₁, σ₂, σ₃] = [X, Y, Z]`.
pub const PAULI: [Mat2; 3] = [PAULI_X, PAULI_Y, PAULI_Z];

/// Tolerance on the norm of a pure state.
pub const NORM_TOL: f64 = 1e-12;
/// Tolerance for Hermiticity and unit trace of a density matrix.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Most negative eigenvalue still accepted as rounding noise.
pub const EIGEN_FLOOR: f64 = -1e-10;
/// Slack allowed on the Bloch-vector norm.
pub const BLOCH_TOL: f64 = 1e-9;

pub fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[ZERO; 2]; 2];
    for (r, row) in out.iter_mut().enumerate() {
        for (c, cell) in row.iter_mut().enumerate() {
            *cell = a[r][0] * b[0][c] + a[r][1] * b[1][c];
        }
    }
    out
}

fn mat_sub(a: &Mat2, b: &Mat2) -> Mat2 {
    [
        [a[0][0] - b[0][0], a[0][1] - b[0][1]],
        [a[1][0] - b[1][0], a[1][1] - b[1][1]],
    ]
}

fn mat_scale(a: &Mat2, s: C64) -> Mat2 {
    [[a[0][0] * s, a[0][1] * s], [a[1][0] * s, a[1][1] * s]]
}

fn adjoint(a: &Mat2) -> Mat2 {
    [[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]]
}

fn trace(a: &Mat2) -> C64 {
    a[0][0] + a[1][1]
}

/// `AB − BA`.
pub fn commutator(a: &Mat2, b: &Mat2) -> Mat2 {
    mat_sub(&mat_mul(a, b), &mat_mul(b, a))
}

/// Largest entrywise modulus of `a − b`.
pub fn max_abs_diff(a: &Mat2, b: &Mat2) -> f64 {
    let d = mat_sub(a, b);
    d.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Levi-Civita symbol over indices `0..3`.
pub fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// Right-hand side of the spin algebra, `2i Σₖ εᵢⱼₖ σₖ`.
pub fn pauli_structure(i: usize, j: usize) -> Mat2 {
    let mut out = [[ZERO; 2]; 2];
    for (k, sigma) in PAULI.iter().enumerate() {
        let eps = levi_civita(i, j, k);
        if eps != 0.0 {
            let term = mat_scale(sigma, C64::new(0.0, 2.0 * eps));
            for r in 0..2 {
                for c in 0..2 {
                    out[r][c] += term[r][c];
                }
            }
        }
    }
    out
}

/// A linear polarization angle, stored modulo π in `[0, π)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct PolarizationAngle(f64);

impl PolarizationAngle {
    pub fn new(radians: f64) -> Self {
        let mut k = radians.rem_euclid(PI);
        // rem_euclid can round up to exactly π for tiny negative inputs
        if k >= PI {
            k = 0.0;
        }
        PolarizationAngle(k)
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    /// Distance on the axis circle: `min(|a − b|, π − |a − b|)`.
    pub fn distance(self, other: PolarizationAngle) -> f64 {
        wrapped_distance(self.0, other.0)
    }
}

impl From<PolarizationAngle> for f64 {
    fn from(k: PolarizationAngle) -> f64 {
        k.0
    }
}

impl fmt::Display for PolarizationAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} rad", self.0)
    }
}

/// Wrapped distance between two axis angles, in `[0, π/2]`.
pub fn wrapped_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(PI);
    d.min(PI - d)
}

/// Signed wrapped difference `a − b` reduced into `[−π/2, π/2)`.
pub fn wrapped_difference(a: f64, b: f64) -> f64 {
    (a - b + PI / 2.0).rem_euclid(PI) - PI / 2.0
}

/// A normalized polarization state `α|H⟩ + β|V⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureQubit {
    alpha: C64,
    beta: C64,
}

impl PureQubit {
    /// Builds a state from amplitudes that must already be normalized.
    pub fn new(alpha: C64, beta: C64) -> Result<Self> {
        let norm = alpha.norm_sqr() + beta.norm_sqr();
        if !norm.is_finite() || (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotPhysical(format!("|alpha|^2 + |beta|^2 = {norm}, expected 1")));
        }
        Ok(PureQubit { alpha, beta })
    }

    /// Builds a state by rescaling arbitrary nonzero amplitudes.
    pub fn normalized(alpha: C64, beta: C64) -> Result<Self> {
        let norm = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::NotPhysical("zero or non-finite amplitudes".into()));
        }
        Ok(PureQubit {
            alpha: alpha / norm,
            beta: beta / norm,
        })
    }

    pub fn horizontal() -> Self {
        PureQubit { alpha: ONE, beta: ZERO }
    }

    pub fn vertical() -> Self {
        PureQubit { alpha: ZERO, beta: ONE }
    }

    /// Linear polarization `cos k |H⟩ + sin k |V⟩`.
    pub fn linear(k: PolarizationAngle) -> Self {
        let (s, c) = k.radians().sin_cos();
        PureQubit {
            alpha: C64::new(c, 0.0),
            beta: C64::new(s, 0.0),
        }
    }

    /// State with Bloch vector at polar angle `theta` and azimuth `phi`.
    pub fn from_bloch_angles(theta: f64, phi: f64) -> Self {
        let (s, c) = (theta / 2.0).sin_cos();
        PureQubit {
            alpha: C64::new(c, 0.0),
            beta: C64::from_polar(s, phi),
        }
    }

    pub fn alpha(&self) -> C64 {
        self.alpha
    }

    pub fn beta(&self) -> C64 {
        self.beta
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureQubit) -> C64 {
        self.alpha.conj() * other.alpha + self.beta.conj() * other.beta
    }

    /// Orientation of the polarization ellipse, `atan2(S₂, S₁)/2` mod π.
    ///
    /// For a linear state `cos k|H⟩ + sin k|V⟩` this is exactly `k`.
    pub fn polarization_angle(&self) -> PolarizationAngle {
        let s = stokes_parameters(self);
        PolarizationAngle::new(0.5 * s.s2.atan2(s.s1))
    }

    pub fn density(&self) -> DensityMatrix {
        let v = [self.alpha, self.beta];
        let mut m = [[ZERO; 2]; 2];
        for r in 0..2 {
            for c in 0..2 {
                m[r][c] = v[r] * v[c].conj();
            }
        }
        DensityMatrix(m)
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn expectation(&self, rho: &DensityMatrix) -> f64 {
        let v = [self.alpha, self.beta];
        let mut acc = ZERO;
        for r in 0..2 {
            for c in 0..2 {
                acc += v[r].conj() * rho.0[r][c] * v[c];
            }
        }
        acc.re
    }
}

/// Linear polarization state at angle `k`; `k = 0` is `|H⟩`.
pub fn make_linear_polarization(k: PolarizationAngle) -> PureQubit {
    PureQubit::linear(k)
}

/// Expectation values of the four Stokes operators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StokesVector {
    pub s0: f64,
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
}

impl StokesVector {
    /// Length of the polarized part `(s1, s2, s3)`.
    pub fn polarized_norm(&self) -> f64 {
        (self.s1 * self.s1 + self.s2 * self.s2 + self.s3 * self.s3).sqrt()
    }
}

pub fn stokes_parameters(state: &PureQubit) -> StokesVector {
    let (a, b) = (state.alpha, state.beta);
    StokesVector {
        s0: (a.conj() * a + b.conj() * b).re,
        s1: (a.conj() * a - b.conj() * b).re,
        s2: (a.conj() * b + a * b.conj()).re,
        s3: (-I * (a.conj() * b - a * b.conj())).re,
    }
}

/// A validated 2×2 density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix(Mat2);

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(entries: Mat2) -> Result<Self> {
        if entries.iter().flatten().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NotPhysical("non-finite entry".into()));
        }
        let herm = max_abs_diff(&entries, &adjoint(&entries));
        if herm > HERMITIAN_TOL {
            return Err(Error::NotPhysical(format!("not Hermitian (deviation {herm:e})")));
        }
        let tr = trace(&entries);
        if (tr.re - 1.0).abs() > HERMITIAN_TOL || tr.im.abs() > HERMITIAN_TOL {
            return Err(Error::NotPhysical(format!("trace {tr} != 1")));
        }
        let rho = DensityMatrix(entries);
        let (lo, _) = rho.eigenvalues();
        if lo < EIGEN_FLOOR {
            return Err(Error::NotPhysical(format!("negative eigenvalue {lo:e}")));
        }
        Ok(rho)
    }

    pub fn maximally_mixed() -> Self {
        DensityMatrix(mat_scale(&IDENTITY, C64::new(0.5, 0.0)))
    }

    /// `ρ = (I + tx X + ty Y + tz Z)/2`.
    pub fn from_pauli_expectations(tx: f64, ty: f64, tz: f64) -> Result<Self> {
        let r = (tx * tx + ty * ty + tz * tz).sqrt();
        if !r.is_finite() || r > 1.0 + BLOCH_TOL {
            return Err(Error::NotPhysical(format!("Bloch vector norm {r} exceeds 1")));
        }
        Ok(Self::from_bloch_unchecked([tx, ty, tz]))
    }

    pub(crate) fn from_bloch_unchecked(t: [f64; 3]) -> Self {
        let half = 0.5;
        DensityMatrix([
            [C64::new(half * (1.0 + t[2]), 0.0), C64::new(half * t[0], -half * t[1])],
            [C64::new(half * t[0], half * t[1]), C64::new(half * (1.0 - t[2]), 0.0)],
        ])
    }

    pub fn entries(&self) -> &Mat2 {
        &self.0
    }

    /// `(tr(Xρ), tr(Yρ), tr(Zρ))`.
    pub fn pauli_expectations(&self) -> [f64; 3] {
        PAULI.map(|sigma| trace(&mat_mul(&sigma, &self.0)).re)
    }

    pub fn determinant(&self) -> f64 {
        let m = &self.0;
        (m[0][0] * m[1][1] - m[0][1] * m[1][0]).re
    }

    /// `tr(ρσ)`.
    pub fn trace_product(&self, other: &DensityMatrix) -> f64 {
        trace(&mat_mul(&self.0, &other.0)).re
    }

    pub fn purity(&self) -> f64 {
        self.trace_product(self)
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> (f64, f64) {
        hermitian_eigen(&self.0).values
    }

    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        max_abs_diff(&self.0, &other.0)
    }

    /// Convex combination `w ρ + (1 − w) σ`.
    pub fn mix(&self, other: &DensityMatrix, w: f64) -> DensityMatrix {
        let a = mat_scale(&self.0, C64::new(w, 0.0));
        let b = mat_scale(&other.0, C64::new(1.0 - w, 0.0));
        DensityMatrix([
            [a[0][0] + b[0][0], a[0][1] + b[0][1]],
            [a[1][0] + b[1][0], a[1][1] + b[1][1]],
        ])
    }
}

/// Inverse of [`DensityMatrix::pauli_expectations`].
pub fn density_from_pauli_expectations(tx: f64, ty: f64, tz: f64) -> Result<DensityMatrix> {
    DensityMatrix::from_pauli_expectations(tx, ty, tz)
}

pub fn pauli_expectations(rho: &DensityMatrix) -> [f64; 3] {
    rho.pauli_expectations()
}

struct Eigen2 {
    values: (f64, f64),
    vectors: [[C64; 2]; 2],
}

/// Closed-form eigensolver for a 2×2 Hermitian matrix.
fn hermitian_eigen(m: &Mat2) -> Eigen2 {
    let a = m[0][0].re;
    let d = m[1][1].re;
    let b = m[0][1];
    let mid = 0.5 * (a + d);
    let rad = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    let hi = mid + rad;
    // det/λ_max avoids the cancellation in mid − rad for near-singular input
    let det = a * d - b.norm_sqr();
    let lo = if hi > 0.0 { det / hi } else { mid - rad };
    let vectors = if b.norm() <= 1e-300 {
        if a <= d {
            [[ONE, ZERO], [ZERO, ONE]]
        } else {
            [[ZERO, ONE], [ONE, ZERO]]
        }
    } else {
        // (H − λ)v = 0 ⇒ v ∝ (b, λ − a); pick the better conditioned form.
        let vec_for = |lambda: f64| {
            let u = [b, C64::new(lambda - a, 0.0)];
            let w = [C64::new(lambda - d, 0.0), b.conj()];
            let (nu, nw) = (u[0].norm_sqr() + u[1].norm_sqr(), w[0].norm_sqr() + w[1].norm_sqr());
            let (v, n) = if nu >= nw { (u, nu) } else { (w, nw) };
            let n = n.sqrt();
            [v[0] / n, v[1] / n]
        };
        [vec_for(lo), vec_for(hi)]
    };
    Eigen2 {
        values: (lo, hi),
        vectors,
    }
}

/// `Σ f(λ) v v†` for a Hermitian 2×2 matrix.
fn spectral_map(m: &Mat2, f: impl Fn(f64) -> f64) -> Mat2 {
    let e = hermitian_eigen(m);
    let mut out = [[ZERO; 2]; 2];
    for (lambda, v) in [e.values.0, e.values.1].into_iter().zip(e.vectors.iter()) {
        let w = f(lambda);
        for r in 0..2 {
            for c in 0..2 {
                out[r][c] += v[r] * v[c].conj() * w;
            }
        }
    }
    out
}

/// Eigenvalues (and determinants) this close to zero are rounding noise.
///
/// Left in place, noise of order 1e−17 on a pure state becomes 3e−9 after
/// the square root in the fidelity.
pub const EIGEN_SNAP: f64 = 1e-15;

fn clamp_eigen(lambda: f64) -> f64 {
    if lambda <= EIGEN_SNAP {
        0.0
    } else {
        lambda
    }
}

/// Uhlmann fidelity `tr √(√ρ σ √ρ)` by spectral decomposition.
///
/// This is the root convention: `fidelity(|ψ⟩⟨ψ|, σ) = √⟨ψ|σ|ψ⟩`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> f64 {
    let sqrt_rho = spectral_map(&rho.0, |l| clamp_eigen(l).sqrt());
    let inner = mat_mul(&mat_mul(&sqrt_rho, &sigma.0), &sqrt_rho);
    // symmetrize away rounding before the eigensolve
    let inner = mat_scale(
        &[
            [inner[0][0] + inner[0][0].conj(), inner[0][1] + inner[1][0].conj()],
            [inner[1][0] + inner[0][1].conj(), inner[1][1] + inner[1][1].conj()],
        ],
        C64::new(0.5, 0.0),
    );
    let (l0, l1) = hermitian_eigen(&inner).values;
    (clamp_eigen(l0).sqrt() + clamp_eigen(l1).sqrt()).clamp(0.0, 1.0)
}

/// Qubit closed form of the squared fidelity, `tr(ρσ) + 2√(det ρ · det σ)`.
pub fn squared_fidelity_closed_form(rho: &DensityMatrix, sigma: &DensityMatrix) -> f64 {
    let dets = clamp_eigen(rho.determinant()) * clamp_eigen(sigma.determinant());
    (rho.trace_product(sigma) + 2.0 * dets.sqrt()).clamp(0.0, 1.0)
}

/// Square root of [`squared_fidelity_closed_form`]; agrees with [`fidelity`].
pub fn fidelity_closed_form(rho: &DensityMatrix, sigma: &DensityMatrix) -> f64 {
    squared_fidelity_closed_form(rho, sigma).sqrt()
}
