//! Stability classification of equilibria via local-minimum tests of the
//! reduced load potential, with the one-term closed-form criterion as a
//! cross-check.
//!
//! The potential `Psi = W - tau*(l1 + l2 + l3)` is restricted to the
//! incompressible set by eliminating one stretch, `phi(x, y) =
//! Psi(x, y, 1/(x y); tau)`, and equilibria are classified from the
//! definiteness of the analytic reduced Hessian. Non-trivial states are
//! tested in all three elimination charts and the most pessimistic verdict
//! wins. This finite-dimensional test represents the variational stability
//! statement restricted to homogeneous triaxial competitors.

use std::sync::OnceLock;

use crate::constitutive::{strain_energy, MaterialModel, Regime, StretchTriple};
use crate::equilibria::{BranchKind, Equilibrium, RESIDUAL_TOL};
use crate::error::{Error, Result};

/// Relative eigenvalue tolerance; the absolute threshold is
/// `1e-8 * (mu + |tau|)`.
const EIG_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StabilityClass {
    Stable,
    NeutrallyStable,
    Unstable,
    /// Hessian eigenvalues within tolerance of zero: a fold or bifurcation
    /// boundary where second-order information cannot decide.
    Marginal,
}

impl std::fmt::Display for StabilityClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            StabilityClass::Stable => "Stable",
            StabilityClass::NeutrallyStable => "NeutrallyStable",
            StabilityClass::Unstable => "Unstable",
            StabilityClass::Marginal => "Marginal",
        };
        f.write_str(name)
    }
}

/// Value, gradient, and Hessian of the reduced potential at `(l1, l2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiEvaluation {
    pub value: f64,
    pub gradient: [f64; 2],
    pub hessian: [[f64; 2]; 2],
}

/// `W(s) - tau * (l1 + l2 + l3)`.
pub fn psi_value(model: &MaterialModel, s: &StretchTriple, tau: f64) -> f64 {
    let [l1, l2, l3] = s.as_array();
    strain_energy(model, s) - tau * (l1 + l2 + l3)
}

/// Analytic derivatives of `phi(x, y) = Psi(x, y, 1/(x y); tau)`.
pub fn reduced_psi_derivatives(model: &MaterialModel, l1: f64, l2: f64, tau: f64) -> PsiEvaluation {
    let (x, y) = (l1, l2);
    let mu1 = model.mu1();
    let mu2 = model.mu2();
    let (x2, y2) = (x * x, y * y);
    let (x3, y3) = (x2 * x, y2 * y);
    let (x4, y4) = (x3 * x, y3 * y);

    let z = 1.0 / (x * y);
    let value = 0.5 * mu1 * (x2 + y2 + z * z - 3.0)
        + 0.5 * mu2 * (1.0 / x2 + 1.0 / y2 + x2 * y2 - 3.0)
        - tau * (x + y + z);

    let gx = mu1 * (x - 1.0 / (x3 * y2)) + mu2 * (x * y2 - 1.0 / x3) - tau * (1.0 - 1.0 / (x2 * y));
    let gy = mu1 * (y - 1.0 / (x2 * y3)) + mu2 * (x2 * y - 1.0 / y3) - tau * (1.0 - 1.0 / (x * y2));

    let hxx = mu1 * (1.0 + 3.0 / (x4 * y2)) + mu2 * (3.0 / x4 + y2) - 2.0 * tau / (x3 * y);
    let hyy = mu1 * (1.0 + 3.0 / (x2 * y4)) + mu2 * (3.0 / y4 + x2) - 2.0 * tau / (x * y3);
    let hxy = 2.0 * mu1 / (x3 * y3) + 2.0 * mu2 * x * y - tau / (x2 * y2);

    PsiEvaluation {
        value,
        gradient: [gx, gy],
        hessian: [[hxx, hxy], [hxy, hyy]],
    }
}

/// Eigenvalues of a symmetric 2x2 matrix, ascending.
fn sym_eigenvalues(h: &[[f64; 2]; 2]) -> [f64; 2] {
    let mean = 0.5 * (h[0][0] + h[1][1]);
    let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
    let disc = (mean * mean - det).max(0.0).sqrt();
    [mean - disc, mean + disc]
}

/// Reduced-Hessian eigenvalues in all three elimination charts.
fn chart_eigenvalues(model: &MaterialModel, s: &StretchTriple, tau: f64) -> [[f64; 2]; 3] {
    let [l1, l2, l3] = s.as_array();
    let pairs = [(l1, l2), (l2, l3), (l3, l1)];
    pairs.map(|(x, y)| sym_eigenvalues(&reduced_psi_derivatives(model, x, y, tau).hessian))
}

/// Classify an equilibrium produced by the solver.
///
/// For compressive loads only the (unstable) trivial state exists; at zero
/// load the reference state is neutrally stable. Under tension the trivial
/// state is classified by the definiteness of the reduced Hessian at the
/// identity, and non-trivial states by the local-minimum test across all
/// three charts: any negative eigenvalue is fatal, strictly positive spectra
/// are neutrally stable, and spectra touching zero are marginal.
pub fn classify_equilibrium(model: &MaterialModel, eq: &Equilibrium) -> Result<StabilityClass> {
    let tau = eq.tau;
    let r = eq.max_residual(model);
    if r > RESIDUAL_TOL * tau.abs().max(1.0) {
        return Err(Error::Inconsistent(format!(
            "equilibrium residual {r:.3e} exceeds tolerance; not a solution of this model"
        )));
    }
    if tau <= 0.0 && eq.branch != BranchKind::Trivial {
        return Err(Error::Inconsistent(
            "non-trivial states do not exist at non-positive loads".into(),
        ));
    }
    if tau < 0.0 {
        return Ok(StabilityClass::Unstable);
    }
    if tau == 0.0 {
        return Ok(StabilityClass::NeutrallyStable);
    }

    let tol = EIG_TOL * (model.shear_modulus() + tau.abs());
    let eigs = chart_eigenvalues(model, &eq.stretches, tau);
    let mut any_negative = false;
    let mut any_zero = false;
    let mut all_zero = true;
    for pair in eigs.iter() {
        for &e in pair {
            if e < -tol {
                any_negative = true;
            } else if e <= tol {
                any_zero = true;
            } else {
                all_zero = false;
            }
        }
    }
    if any_negative {
        return Ok(StabilityClass::Unstable);
    }
    if eq.branch == BranchKind::Trivial {
        if !any_zero {
            Ok(StabilityClass::Stable)
        } else if all_zero {
            // The bifurcation point tau = 2 mu: the whole reduced spectrum
            // degenerates and second order cannot decide.
            Ok(StabilityClass::Marginal)
        } else {
            Ok(StabilityClass::NeutrallyStable)
        }
    } else if any_zero {
        Ok(StabilityClass::Marginal)
    } else {
        Ok(StabilityClass::NeutrallyStable)
    }
}

/// Closed-form criterion for one-term two-equal branches: neutrally stable
/// below `lambda = tau/(3 mu)`, unstable above, marginal at the turning
/// point itself (within 1e-10).
pub fn nh_closed_form_stability(mu: f64, lambda: f64, tau: f64) -> Result<StabilityClass> {
    if !(mu > 0.0 && lambda > 0.0 && mu.is_finite() && lambda.is_finite()) {
        return Err(Error::Domain {
            op: "nh_closed_form_stability",
            reason: format!("requires mu > 0 and lambda > 0 (mu = {mu}, lambda = {lambda})"),
        });
    }
    if (lambda - 1.0).abs() <= 1e-12 {
        return Err(Error::Domain {
            op: "nh_closed_form_stability",
            reason: "criterion applies to non-trivial branch points (lambda != 1)".into(),
        });
    }
    let on_branch = mu * (lambda + 1.0 / lambda.sqrt());
    if (tau - on_branch).abs() > 1e-9 * tau.abs().max(1.0) {
        return Err(Error::Domain {
            op: "nh_closed_form_stability",
            reason: format!(
                "(lambda, tau) is not on the branch: expected tau = {on_branch}, got {tau}"
            ),
        });
    }
    let lambda_star = tau / (3.0 * mu);
    if (lambda - lambda_star).abs() <= 1e-10 {
        Ok(StabilityClass::Marginal)
    } else if lambda < lambda_star {
        Ok(StabilityClass::NeutrallyStable)
    } else {
        Ok(StabilityClass::Unstable)
    }
}

/// Minimand of the stable-plate threshold:
/// `(lambda^(5/2) - 2 lambda^(3/2) + lambda) / (lambda^(3/2) - 1)`,
/// continued through the removable singularity at `lambda = 1` (limit 1/3).
pub fn infimum_objective(lambda: f64) -> f64 {
    let den = lambda.powf(1.5) - 1.0;
    if den.abs() < 1e-12 {
        return 1.0 / 3.0;
    }
    (lambda.powf(2.5) - 2.0 * lambda.powf(1.5) + lambda) / den
}

fn infimum_cache() -> &'static (f64, f64) {
    static CACHE: OnceLock<(f64, f64)> = OnceLock::new();
    CACHE.get_or_init(|| {
        // Coarse scan, then golden-section refinement.
        let (lo, hi) = (1e-9, 1.0 - 1e-9);
        let n = 4096;
        let mut best_i: u32 = 0;
        let mut best_v = f64::INFINITY;
        for i in 0..=n {
            let lam = lo + (hi - lo) * i as f64 / n as f64;
            let v = infimum_objective(lam);
            if v < best_v {
                best_v = v;
                best_i = i;
            }
        }
        let step = (hi - lo) / n as f64;
        let mut a = lo + step * (best_i.saturating_sub(1)) as f64;
        let mut b = (lo + step * (best_i + 1) as f64).min(hi);
        let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
        let mut x1 = b - inv_phi * (b - a);
        let mut x2 = a + inv_phi * (b - a);
        let mut f1 = infimum_objective(x1);
        let mut f2 = infimum_objective(x2);
        while b - a > 1e-12 {
            if f1 < f2 {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - inv_phi * (b - a);
                f1 = infimum_objective(x1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + inv_phi * (b - a);
                f2 = infimum_objective(x2);
            }
        }
        let arg = 0.5 * (a + b);
        (arg, infimum_objective(arg))
    })
}

/// Infimum of [`infimum_objective`] over (0, 1); approximately -0.0452.
/// A model in regime E21 admits neutrally stable plate-like states beyond
/// `tau0 = 2 mu` exactly when `mu2/mu1` exceeds this threshold.
pub fn infimum_threshold() -> f64 {
    infimum_cache().1
}

/// Location of the infimum inside (0, 1).
pub fn infimum_minimizer() -> f64 {
    infimum_cache().0
}

/// Whether an E21 model keeps neutrally stable plate-like states after the
/// reference state destabilizes, i.e. `infimum_threshold() < mu2/mu1 < 0`.
pub fn has_stable_plate_past_tau0(model: &MaterialModel) -> Result<bool> {
    let regime = model.regime();
    if regime != Regime::E21 {
        return Err(Error::WrongRegime {
            expected: "E21",
            actual: regime.to_string(),
        });
    }
    let ratio = model.mu2() / model.mu1();
    Ok(ratio > infimum_threshold())
}
