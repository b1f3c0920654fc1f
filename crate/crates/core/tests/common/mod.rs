//! Independent numerical oracles shared by the integration suites:
//! adaptive quadrature, empirical-distribution statistics, derivative
//! checks, scalar minimization, and a brute-force equilibrium solver.
//! Nothing here calls the library code paths it is used to verify.

#![allow(dead_code)]

/// Adaptive Simpson quadrature with Richardson extrapolation.
///
/// A slice is accepted once its Richardson estimate `|delta|/15` drops below
/// the fixed absolute tolerance `eps` (per-level tolerance halving is a trap
/// for integrands with steep exponential walls: the Simpson defect of a wall
/// slice shrinks at the same geometric rate as the halved budget, so nothing
/// ever accepts and the tree fills to full depth).
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, eps: f64) -> f64 {
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        ((b - a) / 6.0 * (fa + 4.0 * fm + fb), m, fm)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        m: f64,
        fm: f64,
        eps: f64,
        depth: u32,
    ) -> f64 {
        let (left, lm, flm) = simpson(f, a, fa, m, fm);
        let (right, rm, frm) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * eps {
            return left + right + delta / 15.0;
        }
        recurse(f, a, fa, m, fm, left, lm, flm, eps, depth - 1)
            + recurse(f, m, fm, b, fb, right, rm, frm, eps, depth - 1)
    }
    let (fa, fb) = (f(a), f(b));
    let (whole, m, fm) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, whole, m, fm, eps, 48)
}

/// One-sample Kolmogorov-Smirnov statistic against an analytic cdf.
/// Sorts the sample in place.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &mut [f64], cdf: F) -> f64 {
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = samples.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in samples.iter().enumerate() {
        let fx = cdf(x);
        d = d.max(((i + 1) as f64 / n - fx).abs());
        d = d.max((fx - i as f64 / n).abs());
    }
    d
}

/// Asymptotic one-sample KS critical value at significance `alpha`.
pub fn ks_critical(n: usize, alpha: f64) -> f64 {
    (-(alpha / 2.0).ln() / 2.0).sqrt() / (n as f64).sqrt()
}

/// Golden-section minimization; returns `(argmin, min)`.
pub fn golden_min<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > tol {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Grid scan followed by golden-section refinement; returns `(argmin, min)`.
pub fn scan_min<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, n: usize, tol: f64) -> (f64, f64) {
    let mut best_i = 0usize;
    let mut best = f64::INFINITY;
    for i in 0..=n {
        let x = a + (b - a) * i as f64 / n as f64;
        let v = f(x);
        if v < best {
            best = v;
            best_i = i;
        }
    }
    let h = (b - a) / n as f64;
    let lo = (a + h * best_i.saturating_sub(1) as f64).max(a);
    let hi = (a + h * (best_i + 1) as f64).min(b);
    golden_min(f, lo, hi, tol)
}

/// Central-difference gradient of a scalar function of two variables.
pub fn fd_gradient<F: Fn(f64, f64) -> f64>(f: &F, x: f64, y: f64, h: f64) -> [f64; 2] {
    [
        (f(x + h, y) - f(x - h, y)) / (2.0 * h),
        (f(x, y + h) - f(x, y - h)) / (2.0 * h),
    ]
}

/// Central-difference Hessian from an analytic gradient.
pub fn fd_hessian_from_gradient<G: Fn(f64, f64) -> [f64; 2]>(
    g: &G,
    x: f64,
    y: f64,
    h: f64,
) -> [[f64; 2]; 2] {
    let gx_p = g(x + h, y);
    let gx_m = g(x - h, y);
    let gy_p = g(x, y + h);
    let gy_m = g(x, y - h);
    let hxx = (gx_p[0] - gx_m[0]) / (2.0 * h);
    let hyy = (gy_p[1] - gy_m[1]) / (2.0 * h);
    let hxy = 0.5 * ((gx_p[1] - gx_m[1]) / (2.0 * h) + (gy_p[0] - gy_m[0]) / (2.0 * h));
    [[hxx, hxy], [hxy, hyy]]
}

/// Brute-force solve of the full per-axis traction equations for the state
/// with a fixed third stretch: unknown first stretch `l1` (the second
/// follows from incompressibility), pressure eliminated through the first
/// two axes. Returns `(l1, l2, tau)`.
///
/// Scans `l1` for sign changes of the remaining residual and bisects; only
/// brackets producing three distinct stretches are accepted.
pub fn brute_force_three_unequal(
    mu1: f64,
    mu2: f64,
    lambda3: f64,
) -> Option<(f64, f64, f64)> {
    let piola = |l: f64, p: f64| -p / l + mu1 * l - mu2 / (l * l * l);
    // Pressure making axes 1 and 2 carry equal tractions.
    let pressure = |l1: f64| {
        let l2 = 1.0 / (l1 * lambda3);
        (mu2 * (1.0 / (l1 * l1 * l1) - 1.0 / (l2 * l2 * l2)) - mu1 * (l1 - l2))
            / (1.0 / l2 - 1.0 / l1)
    };
    let residual = |l1: f64| {
        let p = pressure(l1);
        piola(l1, p) - piola(lambda3, p)
    };

    let n = 20_000;
    let (lo, hi) = (1e-3f64, 20.0f64);
    let mut prev_x = lo;
    let mut prev_r = f64::NAN;
    for i in 0..=n {
        let x = lo * (hi / lo).powf(i as f64 / n as f64);
        let l2 = 1.0 / (x * lambda3);
        // Skip degenerate configurations where the pressure elimination or
        // the distinctness assumption breaks down.
        if (x - l2).abs() < 1e-6 || (x - lambda3).abs() < 1e-6 || (l2 - lambda3).abs() < 1e-6 {
            prev_r = f64::NAN;
            prev_x = x;
            continue;
        }
        let r = residual(x);
        if prev_r.is_finite() && r.is_finite() && prev_r * r < 0.0 {
            let (mut a, mut b) = (prev_x, x);
            let mut ra = prev_r;
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                let rm = residual(m);
                if ra * rm <= 0.0 {
                    b = m;
                } else {
                    a = m;
                    ra = rm;
                }
            }
            let l1 = 0.5 * (a + b);
            let l2 = 1.0 / (l1 * lambda3);
            if (l1 - l2).abs() > 1e-5 && (l1 - lambda3).abs() > 1e-5 && (l2 - lambda3).abs() > 1e-5
            {
                let tau = piola(l1, pressure(l1));
                return Some((l1, l2, tau));
            }
        }
        prev_r = r;
        prev_x = x;
    }
    None
}
