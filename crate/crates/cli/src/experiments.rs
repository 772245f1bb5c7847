//! One runner per experiment. Each returns the CSV table and the summary
//! report; trials run on the current rayon pool and are collected in trial
//! order so the thread count never changes the output.

use std::f64::consts::PI;

use qmclab_core::clone::{bh_clone, clone_then_tomograph, CLONE_FIDELITY};
use qmclab_core::estimate::{
    bisection_search, complexity_profile, ideal_half_interval, mle_polarization, pauli_tomography, uncertainty_product,
};
use qmclab_core::fock::{coherent_state, phase_statistics};
use qmclab_core::oracle::{false_accept_probability, verify_claim, VerifyMode};
use qmclab_core::stats::{log_log_fit, mean, median, std_dev};
use qmclab_core::wigner::{analytic_wigner_coherent, inverse_radon, sample_quadratures_with, GridSpec, HistogramSpec};
use qmclab_core::{Complex64 as C64, CopyBudget, DensityMatrix, PolarizationAngle, PureQubit, Result, Seed};
use rand::Rng;
use rayon::prelude::*;

use crate::config::*;
use crate::output::{Report, Table};

fn par_trials<T: Send>(n: u64, f: impl Fn(u64) -> Result<T> + Sync + Send) -> Result<Vec<T>> {
    (0..n).into_par_iter().map(f).collect()
}

/// Uniform angle in `[0, π)`.
fn random_angle(seed: Seed) -> PolarizationAngle {
    PolarizationAngle::new(seed.rng().random::<f64>() * PI)
}

fn fit_note(report: &mut Report, label: &str, xs: &[f64], ys: &[f64]) -> f64 {
    let fit = log_log_fit(xs, ys);
    report.set("slope", fit.slope);
    report.set("intercept", fit.intercept);
    report.set("rms_residual", fit.rms_residual());
    let residuals: Vec<String> = fit.residuals.iter().map(|r| format!("{r:+.4}")).collect();
    report.note(format!(
        "log-log fit of {label}: slope {:.4}, intercept {:.4}, residuals [{}]",
        fit.slope,
        fit.intercept,
        residuals.join(", ")
    ));
    fit.slope
}

pub fn tomography_scaling(cfg: &ExperimentConfig, p: &TomographyParams) -> Result<(Table, Report)> {
    let base = Seed(cfg.seed);
    let [bx, by, bz] = p.bloch;
    let source = DensityMatrix::from_pauli_expectations(bx, by, bz)?;
    let mut table = Table::new(cfg.experiment, &["m", "tx", "ty", "tz", "err_x", "err_y", "err_z"]);
    let mut report = Report::default();
    let (mut ms, mut stds) = (Vec::new(), Vec::new());
    for (mi, &m) in p.m_values.iter().enumerate() {
        let offset = mi as u64 * cfg.trials;
        let runs = par_trials(cfg.trials, |t| {
            let seed = base.derive(offset + t, 0);
            let mut budget = CopyBudget::unlimited("tomography");
            let r = pauli_tomography(&source, m, seed, &mut budget)?;
            Ok((seed, r))
        })?;
        let mut per_axis = [Vec::new(), Vec::new(), Vec::new()];
        for (t, (seed, r)) in runs.iter().enumerate() {
            let e = r.expectation_estimates;
            let err = [e[0] - bx, e[1] - by, e[2] - bz];
            for a in 0..3 {
                per_axis[a].push(e[a]);
            }
            table.push(
                offset + t as u64,
                seed.0,
                r.copies_used,
                vec![
                    m.into(),
                    e[0].into(),
                    e[1].into(),
                    e[2].into(),
                    err[0].into(),
                    err[1].into(),
                    err[2].into(),
                ],
            );
        }
        let mut worst: f64 = 0.0;
        for (a, name) in ["x", "y", "z"].iter().enumerate() {
            let s = std_dev(&per_axis[a]);
            let predicted = ((1.0 - p.bloch[a].powi(2)) / m as f64).sqrt();
            report.set(format!("std_{name}@{m}"), s);
            report.set(format!("predicted_std_{name}@{m}"), predicted);
            worst = worst.max((s / predicted - 1.0).abs());
        }
        report.set(format!("max_relative_deviation@{m}"), worst);
        let mean_std = (0..3).map(|a| std_dev(&per_axis[a])).sum::<f64>() / 3.0;
        ms.push(m as f64);
        stds.push(mean_std);
    }
    if ms.len() >= 2 {
        fit_note(&mut report, "per-axis std against m", &ms, &stds);
    }
    Ok((table, report))
}

pub fn bisection(cfg: &ExperimentConfig, p: &BisectionParams) -> Result<(Table, Report)> {
    let base = Seed(cfg.seed);
    let m_max = p.m_max;
    let runs = par_trials(cfg.trials, |t| {
        let seed = base.derive(t, 0);
        let k = random_angle(seed);
        let mut contained = 0u32;
        let mut exact_width = 0u32;
        let mut last = None;
        for m in 1..=m_max {
            let bin = bisection_search(ideal_half_interval(k), m)?;
            contained += u32::from(bin.contains(k.radians()));
            exact_width += u32::from(bin.bin_width == PI / 2f64.powi(m as i32));
            last = Some(bin);
        }
        Ok((seed, k, contained, exact_width, last.expect("m_max ≥ 1")))
    })?;
    let mut table = Table::new(
        cfg.experiment,
        &[
            "k_true",
            "m",
            "bin_index",
            "lower",
            "upper",
            "width",
            "contained_all",
            "exact_width_all",
        ],
    );
    let copies = u64::from(m_max) * u64::from(m_max + 1) / 2;
    let (mut miss, mut bad_width) = (0u64, 0u64);
    for (t, (seed, k, contained, exact, bin)) in runs.into_iter().enumerate() {
        miss += u64::from(m_max - contained);
        bad_width += u64::from(m_max - exact);
        table.push(
            t as u64,
            seed.0,
            copies,
            vec![
                k.radians().into(),
                m_max.into(),
                bin.bin_index.into(),
                bin.lower().into(),
                bin.upper().into(),
                bin.bin_width.into(),
                (contained == m_max).into(),
                (exact == m_max).into(),
            ],
        );
    }
    let mut report = Report::default();
    report.set("searches", (cfg.trials * u64::from(m_max)) as f64);
    report.set("containment_failures", miss as f64);
    report.set("width_failures", bad_width as f64);
    report.note(format!(
        "{} angles x depths 1..={m_max}: {miss} bins missed the angle, {bad_width} widths differed from pi/2^m",
        cfg.trials
    ));
    Ok((table, report))
}

pub fn mle_scaling(cfg: &ExperimentConfig, p: &MleParams) -> Result<(Table, Report)> {
    let base = Seed(cfg.seed);
    let mut table = Table::new(cfg.experiment, &["n", "k_true", "k_hat", "error"]);
    let mut report = Report::default();
    let (mut ns, mut rms) = (Vec::new(), Vec::new());
    for (ni, &n) in p.n_values.iter().enumerate() {
        let offset = ni as u64 * cfg.trials;
        let runs = par_trials(cfg.trials, |t| {
            let k = random_angle(base.derive(offset + t, 0));
            let seed = base.derive(offset + t, 1);
            let mut budget = CopyBudget::unlimited("mle");
            let est = mle_polarization(&PureQubit::linear(k), n, seed, &mut budget)?;
            Ok((seed, k, est))
        })?;
        let mut errors = Vec::with_capacity(runs.len());
        for (t, (seed, k, est)) in runs.into_iter().enumerate() {
            let err = est.k_hat.distance(k);
            errors.push(err);
            table.push(
                offset + t as u64,
                seed.0,
                est.copies_used,
                vec![n.into(), k.radians().into(), est.k_hat.radians().into(), err.into()],
            );
        }
        let r = (errors.iter().map(|e| e * e).sum::<f64>() / errors.len() as f64).sqrt();
        report.set(format!("rms_error@{n}"), r);
        report.set(format!("median_error@{n}"), median(&errors));
        report.set(format!("copies_times_delta_k@{n}"), n as f64 * r);
        ns.push(n as f64);
        rms.push(r);
    }
    fit_note(&mut report, "RMS angle error against copies", &ns, &rms);
    // The bound m·Δk ≥ ½ is conjectural, so it is reported and never enforced.
    let products: Vec<f64> = ns.iter().zip(&rms).map(|(n, r)| n * r).collect();
    let min_product = products.iter().cloned().fold(f64::INFINITY, f64::min);
    report.set("conjecture_min_product", min_product);
    report.note("conjecture report: copies * delta_k (RMS error) against the bound 1/2");
    for (n, prod) in ns.iter().zip(&products) {
        let verdict = if *prod >= 0.5 { "at or above 1/2" } else { "below 1/2" };
        report.note(format!("  n = {n:>10}: m*dk = {prod:.6} ({verdict})"));
    }
    report.note(format!(
        "  the curve {} above 1/2 at every sampled size",
        if min_product >= 0.5 { "stays" } else { "does not stay" }
    ));
    Ok((table, report))
}

pub fn uncertainty_curve(cfg: &ExperimentConfig, p: &UncertaintyCurveParams) -> Result<(Table, Report)> {
    let mut table = Table::new(
        cfg.experiment,
        &["m", "delta_n", "delta_k", "product", "m_pi_over_2_pow_m"],
    );
    let mut report = Report::default();
    let mut worst: f64 = 0.0;
    let mut products = Vec::new();
    for m in 1..=p.m_max {
        let pt = uncertainty_product(m)?;
        let expected = f64::from(m) * PI / 2f64.powi(m as i32);
        worst = worst.max((pt.product - expected).abs());
        products.push(pt.product);
        table.push(
            u64::from(m - 1),
            cfg.seed,
            u64::from(m),
            vec![
                m.into(),
                pt.delta_n.into(),
                pt.delta_k.into(),
                pt.product.into(),
                expected.into(),
            ],
        );
    }
    report.set("product@1", products[0]);
    report.set("max_abs_deviation", worst);
    let monotone = products
        .iter()
        .skip(1)
        .collect::<Vec<_>>()
        .windows(2)
        .all(|w| w[1] < w[0]);
    report.flag("decreasing_from_m2", monotone);
    report.note(format!("m = 1 product {:.16} (pi/2 = {:.16})", products[0], PI / 2.0));
    Ok((table, report))
}

pub fn verifier(cfg: &ExperimentConfig, p: &VerifierParams) -> Result<(Table, Report)> {
    let mode = match p.mode {
        VerifierMode::Batch => VerifyMode::Batch,
        VerifierMode::Sequential => VerifyMode::Sequential,
    };
    let mut table = Table::new(
        cfg.experiment,
        &[
            "m",
            "epsilon",
            "trials",
            "false_accepts",
            "false_accept_rate",
            "expected",
            "z_score",
            "correct_rejections",
            "confidence",
        ],
    );
    let mut report = Report::default();
    let mut max_z: f64 = 0.0;
    let mut rejected_correct = 0u64;
    for m in p.m_min..=p.m_max {
        let base = Seed(cfg.seed).derive(u64::from(m), 0);
        let outcomes = par_trials(cfg.trials, |t| {
            let k = random_angle(base.derive(t, 0));
            let state = PureQubit::linear(k);
            let mut budget = CopyBudget::unlimited("verifier");
            let wrong = PolarizationAngle::new(k.radians() + p.epsilon);
            let bad = verify_claim(&state, wrong, m, mode, base.derive(t, 1), &mut budget)?;
            let good = verify_claim(&state, k, m, mode, base.derive(t, 2), &mut budget)?;
            Ok((bad.accepted, good.accepted, budget.consumed()))
        })?;
        let accepts = outcomes.iter().filter(|o| o.0).count() as u64;
        let rejects = outcomes.iter().filter(|o| !o.1).count() as u64;
        let copies: u64 = outcomes.iter().map(|o| o.2).sum();
        let n = cfg.trials as f64;
        let rate = accepts as f64 / n;
        let expected = false_accept_probability(p.epsilon, m);
        let sigma = (expected * (1.0 - expected) / n).sqrt();
        let z = if sigma > 0.0 { (rate - expected) / sigma } else { 0.0 };
        max_z = max_z.max(z.abs());
        rejected_correct += rejects;
        report.set(format!("false_accept_rate@{m}"), rate);
        report.set(format!("expected@{m}"), expected);
        report.set(format!("z_score@{m}"), z);
        table.push(
            u64::from(m - p.m_min),
            base.0,
            copies,
            vec![
                m.into(),
                p.epsilon.into(),
                cfg.trials.into(),
                accepts.into(),
                rate.into(),
                expected.into(),
                z.into(),
                rejects.into(),
                (1.0 - 0.5f64.powi(m as i32)).into(),
            ],
        );
    }
    report.set("max_abs_z", max_z);
    report.set("correct_rejections", rejected_correct as f64);
    report.note("one row per m aggregating all trials at that m");
    Ok((table, report))
}

pub fn clone_fidelity(cfg: &ExperimentConfig) -> Result<(Table, Report)> {
    let base = Seed(cfg.seed);
    let runs = par_trials(cfg.trials, |t| {
        let seed = base.derive(t, 0);
        let mut rng = seed.rng();
        // uniform on the Bloch sphere
        let theta = (1.0 - 2.0 * rng.random::<f64>()).acos();
        let phi = 2.0 * PI * rng.random::<f64>();
        let out = bh_clone(&PureQubit::from_bloch_angles(theta, phi).density());
        Ok((seed, theta, phi, out))
    })?;
    let mut table = Table::new(
        cfg.experiment,
        &[
            "theta",
            "phi",
            "overlap_fidelity",
            "trace_fidelity",
            "overlap_error",
            "trace_error",
            "clones_identical",
        ],
    );
    let (mut worst_overlap, mut worst_trace): (f64, f64) = (0.0, 0.0);
    let mut identical = true;
    for (t, (seed, theta, phi, out)) in runs.into_iter().enumerate() {
        let eo = out.input_overlap_fidelity - CLONE_FIDELITY;
        let et = out.trace_fidelity - CLONE_FIDELITY.sqrt();
        worst_overlap = worst_overlap.max(eo.abs());
        worst_trace = worst_trace.max(et.abs());
        let same = out.clone_a == out.clone_b;
        identical &= same;
        table.push(
            t as u64,
            seed.0,
            1,
            vec![
                theta.into(),
                phi.into(),
                out.input_overlap_fidelity.into(),
                out.trace_fidelity.into(),
                eo.into(),
                et.into(),
                same.into(),
            ],
        );
    }
    let mut report = Report::default();
    report.set("max_overlap_error", worst_overlap);
    report.set("max_trace_error", worst_trace);
    report.flag("clones_identical", identical);
    report.note("overlap fidelity <psi|rho_out|psi> against 5/6; trace fidelity against sqrt(5/6)");
    Ok((table, report))
}

pub fn clone_tomography(cfg: &ExperimentConfig, p: &CloneTomographyParams) -> Result<(Table, Report)> {
    let base = Seed(cfg.seed);
    let mut table = Table::new(
        cfg.experiment,
        &["m", "k_true", "k_hat", "error", "clones_used", "originals_used"],
    );
    let mut report = Report::default();
    for (mi, &m) in p.m_values.iter().enumerate() {
        let offset = mi as u64 * cfg.trials;
        let runs = par_trials(cfg.trials, |t| {
            let k = random_angle(base.derive(offset + t, 0));
            let seed = base.derive(offset + t, 1);
            let mut budget = CopyBudget::unlimited("clone-tomography");
            let r = clone_then_tomograph(&PureQubit::linear(k), 3 * m, m, seed, &mut budget)?;
            Ok((seed, k, r, budget.consumed()))
        })?;
        let mut errors = Vec::new();
        for (t, (seed, k, r, originals)) in runs.into_iter().enumerate() {
            let k_hat = r.polarization_angle();
            let err = k_hat.distance(k);
            errors.push(err);
            table.push(
                offset + t as u64,
                seed.0,
                originals,
                vec![
                    m.into(),
                    k.radians().into(),
                    k_hat.radians().into(),
                    err.into(),
                    r.clones_used.into(),
                    originals.into(),
                ],
            );
        }
        report.set(format!("median_error@{m}"), median(&errors));
        report.set(format!("mean_error@{m}"), mean(&errors));
    }
    report.note("each estimate consumes one original; clones of it feed Pauli tomography");
    Ok((table, report))
}

pub fn wigner(cfg: &ExperimentConfig, p: &WignerParams) -> Result<(Table, Report)> {
    let alpha = C64::new(p.alpha[0], p.alpha[1]);
    let spec = HistogramSpec {
        x_bins: p.x_bins,
        ..HistogramSpec::for_coherent(alpha)
    };
    let seed = Seed(cfg.seed);
    let sino = sample_quadratures_with(alpha, p.n_per_angle, p.theta_bins, spec, seed)?;
    let grid = GridSpec::for_coherent(alpha, p.grid_step);
    let rec = inverse_radon(&sino, p.cutoff, &grid)?;
    let truth = analytic_wigner_coherent(alpha, &grid)?;
    let mut table = Table::new(
        cfg.experiment,
        &["q", "p", "w_reconstructed", "w_analytic", "difference"],
    );
    let copies = p.n_per_angle * p.theta_bins as u64;
    let np = rec.p_axis.len();
    for ((i, j), &w) in rec.values.indexed_iter() {
        let exact = truth.values[[i, j]];
        table.push(
            (i * np + j) as u64,
            seed.0,
            copies,
            vec![
                rec.q_axis[i].into(),
                rec.p_axis[j].into(),
                w.into(),
                exact.into(),
                (w - exact).into(),
            ],
        );
    }
    let err = rec.max_abs_diff(&truth)?;
    let (pq, pp) = rec.peak();
    let mut report = Report::default();
    report.set("max_abs_error", err);
    report.set("max_abs_error_times_pi", err * PI);
    report.set("integral", rec.integral());
    report.set("peak_q", pq);
    report.set("peak_p", pp);
    report.set("dropped_samples", sino.dropped() as f64);
    report.note(format!(
        "{} angles x {} samples, cutoff {}, grid step {}",
        p.theta_bins, p.n_per_angle, p.cutoff, p.grid_step
    ));
    Ok((table, report))
}

pub fn number_phase(cfg: &ExperimentConfig, p: &NumberPhaseParams) -> Result<(Table, Report)> {
    let mut table = Table::new(
        cfg.experiment,
        &[
            "alpha",
            "dim",
            "mean_n",
            "delta_n",
            "mean_phase",
            "delta_theta",
            "product",
            "near_edge",
        ],
    );
    let mut report = Report::default();
    let rows = p
        .alphas
        .par_iter()
        .map(|&a| {
            let psi = coherent_state(C64::new(a, 0.0), p.dim)?;
            let (mean_n, delta_n) = psi.number_statistics();
            let ph = phase_statistics(&psi);
            Ok((a, mean_n, delta_n, ph, psi.near_truncation_edge()))
        })
        .collect::<Result<Vec<_>>>()?;
    for (i, (a, mean_n, delta_n, ph, edge)) in rows.into_iter().enumerate() {
        let product = delta_n * ph.delta_theta;
        report.set(format!("delta_n@{a}"), delta_n);
        report.set(format!("delta_theta@{a}"), ph.delta_theta);
        report.set(format!("product@{a}"), product);
        table.push(
            i as u64,
            cfg.seed,
            0,
            vec![
                a.into(),
                p.dim.into(),
                mean_n.into(),
                delta_n.into(),
                ph.mean_phase.into(),
                ph.delta_theta.into(),
                product.into(),
                edge.into(),
            ],
        );
    }
    report.note("phase spread from the discrete phase-state distribution over dim phase states");
    Ok((table, report))
}

pub fn complexity_profile_run(cfg: &ExperimentConfig, p: &ComplexityProfileParams) -> Result<(Table, Report)> {
    let strategies = p.resolved_strategies().expect("validated");
    let mut table = Table::new(
        cfg.experiment,
        &[
            "strategy",
            "target",
            "copies_needed",
            "achieved_median_error",
            "saturated",
        ],
    );
    let mut report = Report::default();
    let mut row = 0u64;
    for (si, s) in strategies.iter().enumerate() {
        let seed = Seed(cfg.seed).derive(si as u64, 0);
        let points = complexity_profile(*s, &p.targets, cfg.trials, seed)?;
        let (mut inv_targets, mut copies) = (Vec::new(), Vec::new());
        for pt in &points {
            table.push(
                row,
                seed.0,
                pt.copies,
                vec![
                    s.name().into(),
                    pt.target.into(),
                    pt.copies.into(),
                    pt.achieved.into(),
                    pt.saturated.into(),
                ],
            );
            row += 1;
            report.set(format!("copies[{}]@{}", s.name(), pt.target), pt.copies as f64);
            if !pt.saturated {
                inv_targets.push(1.0 / pt.target);
                copies.push(pt.copies as f64);
            }
        }
        if inv_targets.len() >= 2 {
            let fit = log_log_fit(&inv_targets, &copies);
            report.set(format!("exponent[{}]", s.name()), fit.slope);
            report.note(format!(
                "{}: copies ~ (1/target)^{:.3} (rms residual {:.3})",
                s.name(),
                fit.slope,
                fit.rms_residual()
            ));
        } else {
            report.note(format!("{}: too few unsaturated targets to fit", s.name()));
        }
    }
    report.note(format!(
        "targets met by the median error over {} random angles",
        cfg.trials
    ));
    Ok((table, report))
}
