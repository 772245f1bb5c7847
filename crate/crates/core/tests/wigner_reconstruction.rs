use std::f64::consts::{PI, SQRT_2};

use qmclab_core::wigner::{
    analytic_wigner_coherent, exact_coherent_sinogram, inverse_radon, rotate, sample_quadratures, GridSpec,
    HistogramSpec, DEFAULT_CUTOFF,
};
use qmclab_core::{Complex64 as C64, Seed};

fn reconstruct(alpha: C64, n: u64, seed: u64, grid: &GridSpec) -> qmclab_core::wigner::WignerGrid {
    let sino = sample_quadratures(alpha, n, 180, Seed(seed)).unwrap();
    inverse_radon(&sino, DEFAULT_CUTOFF, grid).unwrap()
}

#[test]
fn exact_vacuum_on_default_histogram() {
    let alpha = C64::new(0.0, 0.0);
    let sino = exact_coherent_sinogram(alpha, 180, HistogramSpec::for_coherent(alpha)).unwrap();
    let grid = GridSpec::for_coherent(alpha, 0.2);
    let rec = inverse_radon(&sino, DEFAULT_CUTOFF, &grid).unwrap();
    let truth = analytic_wigner_coherent(alpha, &grid).unwrap();
    let err = rec.max_abs_diff(&truth).unwrap();
    assert!(err * PI <= 0.01, "error·π = {}", err * PI);
    assert!((rec.integral() - 1.0).abs() <= 0.01);
}

#[test]
fn sampled_vacuum() {
    let alpha = C64::new(0.0, 0.0);
    let grid = GridSpec::for_coherent(alpha, 0.2);
    let rec = reconstruct(alpha, 10_000, 11, &grid);
    let truth = analytic_wigner_coherent(alpha, &grid).unwrap();
    assert!(rec.max_abs_diff(&truth).unwrap() <= 0.05 / PI);
    let integral = rec.integral();
    assert!((0.97..=1.03).contains(&integral), "integral {integral}");
}

#[test]
fn displaced_peak() {
    let alpha = C64::new(2.0, 0.0);
    let grid = GridSpec::for_coherent(alpha, 0.1);
    let rec = reconstruct(alpha, 10_000, 12, &grid);
    let (q, p) = rec.peak();
    assert!((q - 2.0 * SQRT_2).abs() <= 0.1 && p.abs() <= 0.1, "peak ({q}, {p})");
    let integral = rec.integral();
    assert!((0.97..=1.03).contains(&integral), "integral {integral}");
}

#[test]
fn phase_covariance() {
    let alpha = C64::new(1.5, 0.0);
    let delta = 0.9;
    let grid = GridSpec::square(1.5 * SQRT_2 + 4.0, 0.2);
    let reference = reconstruct(alpha, 10_000, 13, &grid);
    let rotated = reconstruct(alpha * C64::from_polar(1.0, delta), 10_000, 14, &grid);
    let mut worst: f64 = 0.0;
    for (i, &q) in rotated.q_axis.iter().enumerate() {
        for (j, &p) in rotated.p_axis.iter().enumerate() {
            let (q0, p0) = rotate(q, p, -delta);
            if q0.abs() > grid.q_max || p0.abs() > grid.p_max {
                continue;
            }
            worst = worst.max((rotated.values[[i, j]] - reference.interpolate(q0, p0)).abs());
        }
    }
    // two independent sampling errors plus interpolation
    assert!(worst * PI <= 0.1, "rotated mismatch ·π = {}", worst * PI);
}

#[test]
fn error_shrinks_with_statistics() {
    let alpha = C64::new(0.0, 0.0);
    let grid = GridSpec::for_coherent(alpha, 0.25);
    let truth = analytic_wigner_coherent(alpha, &grid).unwrap();
    let errs: Vec<f64> = [1_000u64, 10_000, 100_000]
        .iter()
        .map(|&n| reconstruct(alpha, n, 15, &grid).max_abs_diff(&truth).unwrap())
        .collect();
    assert!(errs[1] < errs[0] && errs[2] < errs[1], "{errs:?}");
}
