//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! (run with `--nocapture` to see them all).
//!
//! Known red: `a07_mr_negative_tail_mass` encodes a 0.10 +/- 0.03 target for
//! the non-trivial mass of the negative-coefficient ensemble at tau = 25;
//! the implemented chain reproducibly measures about 0.21 (the fold-load
//! spread induced by the documented hyperparameters is wider than the
//! target assumes). The check is kept as specified rather than retuned; see
//! the README note.

mod common;

use std::time::Instant;

use rivlin_cube::constitutive::classify_regime;
use rivlin_cube::equilibria::{
    critical_loads, dead_load_two_equal, solve_equilibria, BranchKind, Equilibrium,
};
use rivlin_cube::randvars::{
    beta_cdf, beta_pdf, coeff_moments, gamma_cdf, gamma_pdf, sample_beta, sample_gamma,
    BetaParams, GammaParams, ShiftMode,
};
use rivlin_cube::stability::{
    classify_equilibrium, infimum_minimizer, infimum_threshold, nh_closed_form_stability,
    reduced_psi_derivatives,
};
use rivlin_cube::stochastic::{
    count_probs_nh, default_lambda_edges, mc_bifurcation_histogram,
    mc_bifurcation_histogram_serial, mc_count_probs, EnsembleLaw, SelectionPolicy, TauGrid,
};
use rivlin_cube::{MaterialModel, Regime, RngStream, StretchTriple};

fn report(criterion: &str, pass: bool, detail: &str) {
    println!(
        "ACCEPTANCE {:>4} — {criterion}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "{criterion}: {detail}");
}

fn paper_gamma() -> GammaParams {
    GammaParams::new(400.0, 0.0013).unwrap()
}

#[test]
fn a01_nh_analytic_probabilities() {
    let start = Instant::now();
    let p = count_probs_nh(1.04, &paper_gamma()).unwrap();
    let elapsed = start.elapsed();
    let ok = (p.p1 - 0.10).abs() <= 0.05
        && (p.p2 - 0.50).abs() <= 0.05
        && (p.p3 - 0.40).abs() <= 0.05
        && elapsed.as_secs_f64() < 1.0;
    report(
        "criterion 1: one-term analytic count probabilities at tau = 1.04",
        ok,
        &format!(
            "(P1, P2, P3) = ({:.4}, {:.4}, {:.4}) vs (0.10, 0.50, 0.40) +/- 0.05, {:?}",
            p.p1, p.p2, p.p3, elapsed
        ),
    );
}

#[test]
fn a02_nh_monte_carlo_vs_analytic() {
    let start = Instant::now();
    let grid = TauGrid::new(0.8, 1.2, 100).unwrap();
    let trials = 10_000u64;
    let seed = 2024u64;
    let empirical = mc_count_probs(&grid, trials, &paper_gamma(), seed).unwrap();
    let mut worst = 0.0f64;
    for row in &empirical {
        let exact = count_probs_nh(row.tau, &paper_gamma()).unwrap();
        worst = worst
            .max((row.p1 - exact.p1).abs())
            .max((row.p2 - exact.p2).abs())
            .max((row.p3 - exact.p3).abs());
    }
    let elapsed = start.elapsed();
    let ok = worst <= 0.02 && elapsed.as_secs_f64() < 10.0;
    report(
        "criterion 2: Monte Carlo count probabilities vs analytic",
        ok,
        &format!(
            "max |empirical - analytic| = {worst:.4} (<= 0.02), grid 101 x {trials} trials, seed {seed}, {elapsed:?}"
        ),
    );
}

#[test]
fn a03_observed_stretch_atom() {
    // Exact smallest non-trivial stretch at tau = 2*mu for the mean model:
    // s = sqrt(lambda) solves s^3 - 2s + 1 = (s - 1)(s^2 + s - 1), giving
    // lambda = ((sqrt 5 - 1)/2)^2 = (3 - sqrt 5)/2.
    let golden = (3.0 - 5f64.sqrt()) / 2.0;
    let eqs = solve_equilibria(&MaterialModel::neo_hookean(0.52).unwrap(), 1.04).unwrap();
    let plate = eqs
        .iter()
        .find(|e| e.branch == BranchKind::PlateLike)
        .expect("plate state at tau = 2 mu");
    let root_ok = (plate.stretches.l1() - golden).abs() < 1e-10;

    let grid = TauGrid::new(0.8, 1.2, 100).unwrap();
    let trials = 10_000u64;
    let h = mc_bifurcation_histogram(
        &grid,
        trials,
        &paper_gamma(),
        &EnsembleLaw::NeoHookean,
        SelectionPolicy::PreferReference,
        2024,
        &default_lambda_edges(),
    )
    .unwrap();
    let row = 60; // tau = 1.04
    assert!((h.taus[row] - 1.04).abs() < 1e-9);
    let unit = h.unit_bin().unwrap();
    let trivial_freq = h.frequency(row, unit);

    let exact = count_probs_nh(h.taus[row], &paper_gamma()).unwrap();
    let p = exact.p1 + exact.p3;
    let bound = 4.0 * (p * (1.0 - p) / trials as f64).sqrt();
    let atom_ok = (trivial_freq - p).abs() <= bound;

    // Mode of the non-trivial mass.
    let mut mode_bin = 0;
    let mut mode_count = 0u64;
    for bin in 0..h.n_bins() {
        if bin != unit && h.counts[row][bin] > mode_count {
            mode_count = h.counts[row][bin];
            mode_bin = bin;
        }
    }
    let mode_center = h.bin_center(mode_bin);
    let mode_ok = (0.37..=0.39).contains(&mode_center);

    report(
        "criterion 3: trivial-state atom and non-trivial mode at tau = 1.04",
        root_ok && atom_ok && mode_ok,
        &format!(
            "unit-bin freq {trivial_freq:.4} vs P1+P3 = {p:.4} (+/- {bound:.4}), mode center {mode_center:.4} in [0.37, 0.39], exact root check {root_ok}"
        ),
    );
}

#[test]
fn a04_critical_constants() {
    let mut ok = true;
    let mut detail = String::new();
    for mu in [1.0, 0.52, 2.4, 7.21] {
        let cl = critical_loads(&MaterialModel::neo_hookean(mu).unwrap());
        let tau_star_ratio = cl.tau_star.unwrap() / mu;
        let expected_ratio = 3.0 / 2f64.powf(2.0 / 3.0);
        let lam = cl.lambda_star.unwrap();
        let expected_lam = 2f64.powf(-2.0 / 3.0);
        ok &= (tau_star_ratio - expected_ratio).abs() <= 1e-12 * expected_ratio;
        ok &= (lam - expected_lam).abs() <= 1e-12;
        ok &= cl.tau0 == 2.0 * mu;
        if mu == 1.0 {
            detail = format!(
                "tau*/mu = {tau_star_ratio:.15} (3/2^(2/3) = {expected_ratio:.15}), lambda* = {lam:.15}, tau0 = 2 mu exactly"
            );
        }
    }
    report("criterion 4: closed-form critical constants", ok, &detail);
}

#[test]
fn a05_infimum_threshold() {
    let start = Instant::now();
    let v = infimum_threshold();
    let arg = infimum_minimizer();
    let elapsed = start.elapsed();
    let ok = (v + 0.045).abs() <= 1e-3 && arg > 0.0 && arg < 1.0 && elapsed.as_secs_f64() < 0.1;
    report(
        "criterion 5: stable-plate threshold infimum",
        ok,
        &format!("infimum = {v:.6} (target -0.045 +/- 1e-3), minimizer = {arg:.6}, {elapsed:?}"),
    );
}

#[test]
fn a06_kearsley_regime() {
    let regime = classify_regime(2.484, -0.148);
    let ratio: f64 = -0.148 / 2.484;
    let boundary = -(5f64.powf(-5.0 / 3.0));
    let ratio_4dp = (ratio * 1e4).round() / 1e4;
    let boundary_4dp = (boundary * 1e4).round() / 1e4;
    let ok = regime == Regime::E21
        && ratio_4dp == -0.0596
        && boundary_4dp == -0.0684
        && ratio > boundary;
    report(
        "criterion 6: regime of (mu1, mu2) = (2.484, -0.148)",
        ok,
        &format!("regime {regime}, mu2/mu1 = {ratio_4dp} > -5^(-5/3) = {boundary_4dp}"),
    );
}

#[test]
fn a07_mr_negative_tail_mass() {
    let grid = TauGrid::new(25.0, 26.0, 1).unwrap();
    let trials = 10_000u64;
    let g = GammaParams::new(721.0, 0.01).unwrap();
    let law = EnsembleLaw::MooneyRivlin {
        r1: BetaParams::new(10_000.0, 500.0).unwrap(),
        shift: ShiftMode::NegativeCase,
    };
    let h = mc_bifurcation_histogram(
        &grid,
        trials,
        &g,
        &law,
        SelectionPolicy::PreferReference,
        2024,
        &default_lambda_edges(),
    )
    .unwrap();
    let row = 0; // tau = 25 exactly
    assert_eq!(h.taus[row], 25.0);
    let unit = h.unit_bin().unwrap();
    let nontrivial: u64 = (0..h.n_bins())
        .filter(|&b| b != unit)
        .map(|b| h.counts[row][b])
        .sum();
    let mass = nontrivial as f64 / trials as f64;
    let ok = (mass - 0.10).abs() <= 0.03;
    report(
        "criterion 7: negative-coefficient ensemble non-trivial mass at tau = 25",
        ok,
        &format!("non-trivial-bin mass = {mass:.4}, target 0.10 +/- 0.03"),
    );
}

#[test]
fn a08_equilibrium_residual_suite() {
    let mut stream = RngStream::new(77, "acceptance-residuals", 0);
    let mut checked = 0u32;
    for _ in 0..1000 {
        let mu1 = (0.1f64.ln() + stream.next_open01() * (10f64.ln() - 0.1f64.ln())).exp();
        let ratio = -0.95 + stream.next_open01() * 3.95;
        let model = MaterialModel::new(mu1, mu1 * ratio).unwrap();
        let mu = model.shear_modulus();
        let tau = stream.next_open01() * 4.0 * mu;

        let eqs = solve_equilibria(&model, tau).unwrap();
        for eq in &eqs {
            let residual = eq.max_residual(&model);
            assert!(
                residual <= 1e-9 * tau.abs().max(1.0),
                "residual {residual} for {model:?} at tau {tau}"
            );
            let [l1, l2, l3] = eq.stretches.as_array();
            assert!((l1 * l2 * l3 - 1.0).abs() <= 1e-12);
            // Round trip lambda -> tau on two-equal branches.
            if matches!(eq.branch, BranchKind::RodLike | BranchKind::PlateLike) {
                let back = dead_load_two_equal(&model, l1).unwrap();
                assert!(
                    (back - tau).abs() <= 1e-9 * tau.abs().max(1.0),
                    "round trip {back} vs {tau}"
                );
            }
        }
        // Scaling equivariance of the full solution set.
        for c in [0.1, 10.0] {
            let scaled = MaterialModel::new(c * model.mu1(), c * model.mu2()).unwrap();
            let scaled_eqs = solve_equilibria(&scaled, c * tau).unwrap();
            assert_eq!(eqs.len(), scaled_eqs.len(), "{model:?} tau {tau} c {c}");
            for (a, b) in eqs.iter().zip(&scaled_eqs) {
                assert_eq!(a.branch, b.branch);
                for (x, y) in a
                    .stretches
                    .as_array()
                    .iter()
                    .zip(b.stretches.as_array().iter())
                {
                    assert!((x - y).abs() <= 1e-9 * x.max(1.0), "{x} vs {y}");
                }
            }
        }
        checked += 1;
    }
    report(
        "criterion 8: equilibrium residual and scaling suite",
        checked == 1000,
        &format!("{checked} random models: residual <= 1e-9*max(1,tau), volume <= 1e-12, round trip <= 1e-9, scaling c in {{0.1, 10}}"),
    );
}

#[test]
fn a09_stability_oracle_agreement() {
    // Hessian classification vs the closed-form criterion on 500 one-term
    // branch points away from the marginal stretch.
    let mut stream = RngStream::new(78, "acceptance-stability", 0);
    let mut agree = 0u32;
    let mut total = 0u32;
    while total < 500 {
        let mu = 0.1 + stream.next_open01() * 9.9;
        let lam = 0.05 + stream.next_open01() * 2.95;
        if (lam - 1.0).abs() < 1e-3 {
            continue;
        }
        let tau = mu * (lam + 1.0 / lam.sqrt());
        if (lam - tau / (3.0 * mu)).abs() <= 1e-3 {
            continue;
        }
        let model = MaterialModel::neo_hookean(mu).unwrap();
        let branch = if lam < 1.0 {
            BranchKind::PlateLike
        } else {
            BranchKind::RodLike
        };
        let eq = Equilibrium::new(
            &model,
            StretchTriple::two_equal(lam).unwrap(),
            branch,
            tau,
            3,
        )
        .unwrap();
        let hessian = classify_equilibrium(&model, &eq).unwrap();
        let closed = nh_closed_form_stability(mu, lam, tau).unwrap();
        if hessian == closed {
            agree += 1;
        }
        total += 1;
    }

    // Analytic reduced Hessian vs central finite differences on 200 points.
    let mut fd_ok = 0u32;
    for _ in 0..200 {
        let mu1 = 0.2 + stream.next_open01() * 5.0;
        let ratio = -0.9 + stream.next_open01() * 3.0;
        let model = MaterialModel::new(mu1, mu1 * ratio).unwrap();
        let tau = stream.next_open01() * 6.0;
        let x = 0.3 + stream.next_open01() * 2.0;
        let y = 0.3 + stream.next_open01() * 2.0;
        let d = reduced_psi_derivatives(&model, x, y, tau);
        let grad = |a: f64, b: f64| reduced_psi_derivatives(&model, a, b, tau).gradient;
        let h_fd = common::fd_hessian_from_gradient(&grad, x, y, 1e-5);
        let mut all = true;
        for i in 0..2 {
            for j in 0..2 {
                let scale = d.hessian[i][j].abs().max(1.0);
                all &= (d.hessian[i][j] - h_fd[i][j]).abs() <= 1e-5 * scale;
            }
        }
        if all {
            fd_ok += 1;
        }
    }

    let ok = agree == total && fd_ok == 200;
    report(
        "criterion 9: stability oracle agreement",
        ok,
        &format!("closed form vs Hessian: {agree}/{total}; finite-difference Hessian: {fd_ok}/200 within 1e-5 relative"),
    );
}

#[test]
fn a10_special_functions() {
    // cdf vs adaptive quadrature of the pdf at 100 abscissae per family,
    // covering the extreme shapes in use.
    let gamma_sets = [
        GammaParams::new(400.0, 0.0013).unwrap(),
        GammaParams::new(721.0, 0.01).unwrap(),
        GammaParams::new(10_000.0, 1e-4).unwrap(),
    ];
    let mut worst_gamma = 0.0f64;
    let mut n_gamma = 0;
    for g in &gamma_sets {
        let sd = g.variance().sqrt();
        for k in 0..34 {
            let x = (g.mean() - 4.0 * sd) + 8.0 * sd * k as f64 / 33.0;
            if x <= 0.0 {
                continue;
            }
            let pdf = |u: f64| gamma_pdf(g, u);
            let quad = common::adaptive_simpson(&pdf, 0.0, x, 1e-12);
            worst_gamma = worst_gamma.max((gamma_cdf(g, x) - quad).abs());
            n_gamma += 1;
        }
    }

    let beta_sets = [
        BetaParams::new(400.0, 100.0).unwrap(),
        BetaParams::new(10_000.0, 500.0).unwrap(),
        BetaParams::new(2.0, 2.0).unwrap(),
    ];
    let mut worst_beta = 0.0f64;
    let mut n_beta = 0;
    for b in &beta_sets {
        for k in 0..34 {
            let r = 0.01 + 0.98 * k as f64 / 33.0;
            let pdf = |u: f64| beta_pdf(b, u);
            let quad = common::adaptive_simpson(&pdf, 0.0, r, 1e-12);
            worst_beta = worst_beta.max((beta_cdf(b, r) - quad).abs());
            n_beta += 1;
        }
    }

    // Kolmogorov-Smirnov at the 1% level on 1e5 draws.
    let n = 100_000usize;
    let g = GammaParams::new(400.0, 0.0013).unwrap();
    let mut stream = RngStream::new(79, "acceptance-ks-gamma", 0);
    let mut draws: Vec<f64> = (0..n).map(|_| sample_gamma(&g, &mut stream)).collect();
    let d_gamma = common::ks_statistic(&mut draws, |x| gamma_cdf(&g, x));

    let b = BetaParams::new(10_000.0, 500.0).unwrap();
    let mut stream = RngStream::new(79, "acceptance-ks-beta", 0);
    let mut draws: Vec<f64> = (0..n).map(|_| sample_beta(&b, &mut stream)).collect();
    let d_beta = common::ks_statistic(&mut draws, |r| beta_cdf(&b, r));

    let crit = common::ks_critical(n, 0.01);
    let ok = worst_gamma <= 1e-8
        && worst_beta <= 1e-8
        && n_gamma >= 100
        && n_beta >= 100
        && d_gamma < crit
        && d_beta < crit;
    report(
        "criterion 10: special functions vs quadrature and KS",
        ok,
        &format!(
            "max |cdf - quadrature|: gamma {worst_gamma:.2e} ({n_gamma} pts), beta {worst_beta:.2e} ({n_beta} pts); KS D = {d_gamma:.5}/{d_beta:.5} < {crit:.5}"
        ),
    );
}

#[test]
fn a11_coefficient_moments() {
    let g = GammaParams::new(240.0, 0.01).unwrap();
    let b = BetaParams::new(400.0, 100.0).unwrap();
    let m = coeff_moments(&g, &b, 0.0);
    // The complementary mean follows from the printed relations exactly:
    // mean_mu2 = (1 - mean R1) * mean mu = 0.2 * 2.4 = 0.48 (not 0.4; the
    // two mean coefficients partition the mean shear modulus).
    let identity = m.var_mu1 + m.var_mu2 + 2.0 * m.cov_mu1_mu2 - g.variance();
    let ok = (m.mean_mu1 - 1.92).abs() <= 1e-12
        && (m.mean_mu2 - 0.48).abs() <= 1e-12
        && identity.abs() <= 1e-12;
    report(
        "criterion 11: coefficient moments",
        ok,
        &format!(
            "mean_mu1 = {:.12}, mean_mu2 = {:.12} (formula value 0.48), Var identity residual = {:.2e}",
            m.mean_mu1, m.mean_mu2, identity
        ),
    );
}

#[test]
fn a12_reproducibility_across_worker_counts() {
    let grid = TauGrid::new(0.9, 1.15, 9).unwrap();
    let trials = 400u64;
    let g = paper_gamma();
    let law = EnsembleLaw::MooneyRivlin {
        r1: BetaParams::new(400.0, 100.0).unwrap(),
        shift: ShiftMode::Zero,
    };
    let edges = default_lambda_edges();
    let run = || {
        mc_bifurcation_histogram(
            &grid,
            trials,
            &g,
            &law,
            SelectionPolicy::PreferReference,
            31_337,
            &edges,
        )
        .unwrap()
    };

    let serial = mc_bifurcation_histogram_serial(
        &grid,
        trials,
        &g,
        &law,
        SelectionPolicy::PreferReference,
        31_337,
        &edges,
    )
    .unwrap();
    let default_pool = run();
    let mut all_equal = default_pool == serial;
    for threads in [1usize, 2, 4] {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        let h = pool.install(run);
        all_equal &= h == serial;
    }
    report(
        "criterion 12 (library): histograms identical across worker counts",
        all_equal,
        "serial path == rayon path at 1, 2, 4, and default worker counts",
    );
}
