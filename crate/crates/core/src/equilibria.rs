//! Enumeration of homogeneous triaxial equilibria under an equitriaxial dead
//! load, branch dead-load maps, and regime-dependent critical loads.
//!
//! An equilibrium with stretches `(l1, l2, l3)` and pressure `p` satisfies
//! `mu1 li^2 - mu2/li^2 - tau li - p = 0` for every axis. Two-equal branches
//! are parametrized as `(lambda, 1/sqrt(lambda), 1/sqrt(lambda))`; their dead
//! load is `tau = (mu1 + mu2/lambda)(lambda + 1/sqrt(lambda))`. The branch
//! with three unequal stretches exists only for `0 < mu2 < mu1/3` and its
//! stretches are, for a given load, the real roots of a cubic.

use std::fmt;

use crate::constitutive::{MaterialModel, Regime, StretchTriple};
use crate::error::{Error, Result};

/// Residual tolerance on the equilibrium equations, scaled by `max(1, |tau|)`.
pub const RESIDUAL_TOL: f64 = 1e-9;

/// Two-equal roots this close to 1 collapse into the trivial state (the
/// reference state is always a root of the system at `tau = 2*mu`).
const TRIVIAL_MERGE_TOL: f64 = 1e-8;

/// Relative separation below which two stretches are considered equal when
/// screening three-unequal candidates.
const DISTINCT_TOL: f64 = 1e-7;

/// Load-residual target for branch root refinement, scaled by `max(1, tau)`.
const ROOT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BranchKind {
    Trivial,
    RodLike,
    PlateLike,
    ThreeUnequal,
}

impl BranchKind {
    fn sort_rank(self) -> u8 {
        match self {
            BranchKind::Trivial => 0,
            BranchKind::PlateLike => 1,
            BranchKind::RodLike => 2,
            BranchKind::ThreeUnequal => 3,
        }
    }
}

impl fmt::Display for BranchKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            BranchKind::Trivial => "Trivial",
            BranchKind::RodLike => "RodLike",
            BranchKind::PlateLike => "PlateLike",
            BranchKind::ThreeUnequal => "ThreeUnequal",
        };
        f.write_str(name)
    }
}

/// One equilibrium orbit representative in canonical orientation: the odd
/// stretch on axis 1 for rod/plate states, descending order for three
/// unequal stretches. `multiplicity` counts the axis relabelings of the
/// orbit (1 trivial, 3 rod/plate, 6 three-unequal).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Equilibrium {
    pub stretches: StretchTriple,
    pub branch: BranchKind,
    pub pressure: f64,
    pub tau: f64,
    pub multiplicity: u32,
}

impl Equilibrium {
    /// Build an equilibrium, deriving the pressure from axis 1 and
    /// validating the residual on all three axes.
    pub fn new(
        model: &MaterialModel,
        stretches: StretchTriple,
        branch: BranchKind,
        tau: f64,
        multiplicity: u32,
    ) -> Result<Self> {
        let l1 = stretches.l1();
        let pressure = model.mu1() * l1 * l1 - model.mu2() / (l1 * l1) - tau * l1;
        let eq = Self {
            stretches,
            branch,
            pressure,
            tau,
            multiplicity,
        };
        let r = eq.max_residual(model);
        if r > RESIDUAL_TOL * tau.abs().max(1.0) {
            return Err(Error::Inconsistent(format!(
                "equilibrium residual {r:.3e} exceeds tolerance at tau = {tau}"
            )));
        }
        Ok(eq)
    }

    /// Largest absolute residual of the per-axis equilibrium equation.
    pub fn max_residual(&self, model: &MaterialModel) -> f64 {
        self.stretches
            .as_array()
            .iter()
            .map(|&l| {
                (model.mu1() * l * l - model.mu2() / (l * l) - self.tau * l - self.pressure).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Regime-dependent critical dead loads. `tau0 = 2*mu` is the load at which
/// the reference state loses stability. The optional fields are populated
/// per regime: the fold pair of the two-equal map for `E21`, the extremes of
/// the three-unequal branch for `E12`, and the single turning point of the
/// one-term model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalLoads {
    pub tau0: f64,
    pub tau_star: Option<f64>,
    pub lambda_star: Option<f64>,
    pub tau_min: Option<f64>,
    pub tau_max: Option<f64>,
    pub lambda_at_min: Option<f64>,
    pub lambda_at_max: Option<f64>,
}

/// Lower end of the valid two-equal stretch domain: the Baker-Ericksen bound
/// `-mu2/mu1` when `mu2 < 0`, otherwise 0.
#[inline]
fn be_lower_bound(model: &MaterialModel) -> f64 {
    if model.mu2() < 0.0 {
        -model.mu2() / model.mu1()
    } else {
        0.0
    }
}

#[inline]
fn branch_map_unchecked(model: &MaterialModel, lambda: f64) -> f64 {
    (model.mu1() + model.mu2() / lambda) * (lambda + 1.0 / lambda.sqrt())
}

/// `d tau / d lambda` of the two-equal map, via `q(s) / (2 s^5)` with
/// `s = sqrt(lambda)` and `q(s) = 2 mu1 s^5 - mu1 s^2 - 3 mu2`.
#[inline]
fn branch_map_derivative(model: &MaterialModel, lambda: f64) -> f64 {
    let s = lambda.sqrt();
    stationary_poly(model, s) / (2.0 * s.powi(5))
}

#[inline]
fn stationary_poly(model: &MaterialModel, s: f64) -> f64 {
    2.0 * model.mu1() * s.powi(5) - model.mu1() * s * s - 3.0 * model.mu2()
}

/// Dead load on the two-equal branch `(lambda, 1/sqrt(lambda), 1/sqrt(lambda))`.
pub fn dead_load_two_equal(model: &MaterialModel, lambda: f64) -> Result<f64> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::Domain {
            op: "dead_load_two_equal",
            reason: format!("stretch must be positive (lambda = {lambda})"),
        });
    }
    let bound = be_lower_bound(model);
    if model.mu2() < 0.0 && lambda <= bound {
        return Err(Error::Domain {
            op: "dead_load_two_equal",
            reason: format!(
                "Baker-Ericksen bound violated: lambda = {lambda} must exceed -mu2/mu1 = {bound}"
            ),
        });
    }
    Ok(branch_map_unchecked(model, lambda))
}

/// `mu1 - mu2*(l1 l2 + l2 l3 + l3 l1)`; zero on the three-unequal branch.
pub fn unequal_constraint_residual(model: &MaterialModel, s: &StretchTriple) -> f64 {
    let [l1, l2, l3] = s.as_array();
    model.mu1() - model.mu2() * (l1 * l2 + l2 * l3 + l3 * l1)
}

#[inline]
fn tau_three_unequal_unchecked(model: &MaterialModel, lambda3: f64) -> f64 {
    let m = model.mu1() / model.mu2();
    model.mu2() / lambda3 * (m + lambda3 * lambda3) * (m - 1.0 / lambda3)
}

/// The `lambda3` interval on which the three-unequal branch exists.
///
/// Given `lambda3`, the other two stretches are the roots of
/// `x^2 - sigma x + 1/lambda3` with `sigma = (m - 1/lambda3)/lambda3` and
/// `m = mu1/mu2`; they are real and distinct exactly when
/// `u (m - u)^2 > 4` for `u = 1/lambda3`. The interval ends are the two
/// relevant roots of that cubic and coincide with the plate-like and
/// rod-like intersections of the branch.
pub fn three_unequal_interval(model: &MaterialModel) -> Result<(f64, f64)> {
    if model.mu2() <= 0.0 {
        return Err(Error::Domain {
            op: "three_unequal_interval",
            reason: format!(
                "three unequal stretches require mu2 > 0 (mu2 = {})",
                model.mu2()
            ),
        });
    }
    let m = model.mu1() / model.mu2();
    if m <= 3.0 {
        return Err(Error::Domain {
            op: "three_unequal_interval",
            reason: format!("branch exists only for mu2 < mu1/3 (mu1/mu2 = {m})"),
        });
    }
    Ok(three_unequal_interval_unchecked(model))
}

fn three_unequal_interval_unchecked(model: &MaterialModel) -> (f64, f64) {
    let m = model.mu1() / model.mu2();
    let h = |u: f64| u * (m - u) * (m - u) - 4.0;
    let dh = |u: f64| (m - u) * (m - 3.0 * u);

    // Roots straddle the maximum of u(m-u)^2 at u = m/3.
    let mut a = 4.0 / (m * m);
    while h(a) >= 0.0 {
        a *= 0.5;
    }
    let u1 = refine_root(&h, &dh, a, m / 3.0, 0.0);
    let u2 = refine_root(&h, &dh, m / 3.0, m, 0.0);
    (1.0 / u2, 1.0 / u1)
}

/// Dead load on the three-unequal branch as a function of its third stretch.
pub fn dead_load_three_unequal(model: &MaterialModel, lambda3: f64) -> Result<f64> {
    let (lo, hi) = three_unequal_interval(model)?;
    if !(lambda3 >= lo && lambda3 <= hi) {
        return Err(Error::Domain {
            op: "dead_load_three_unequal",
            reason: format!("lambda3 = {lambda3} outside the branch interval [{lo}, {hi}]"),
        });
    }
    Ok(tau_three_unequal_unchecked(model, lambda3))
}

/// Stationary stretches of the two-equal dead-load map, sorted ascending.
/// One-term models have a single turning point at `2^(-2/3)`; positive `mu2`
/// gives one minimum, negative `mu2` a max/min fold pair when the model lies
/// in regime E21 and none otherwise.
fn stationary_stretches(model: &MaterialModel) -> Vec<f64> {
    let mu1 = model.mu1();
    let mu2 = model.mu2();
    let q = |s: f64| stationary_poly(model, s);
    let dq = |s: f64| 10.0 * mu1 * s.powi(4) - 2.0 * mu1 * s;

    if mu2 == 0.0 {
        return vec![0.5f64.powf(2.0 / 3.0)];
    }
    let pivot = 5f64.powf(-1.0 / 3.0);
    if mu2 > 0.0 {
        // q(0+) < 0 and q eventually positive: a single root past the pivot.
        let mut b = 1.0;
        while q(b) <= 0.0 {
            b *= 2.0;
        }
        let s = refine_root(&q, &dq, pivot.min(b * 0.5), b, 0.0);
        return vec![s * s];
    }
    // mu2 < 0: fold pair exists iff q dips below zero at its interior minimum.
    if q(pivot) >= 0.0 {
        return Vec::new();
    }
    let mut a = pivot * 0.5;
    while q(a) <= 0.0 {
        a *= 0.5;
    }
    let s1 = refine_root(&q, &dq, a, pivot, 0.0);
    let mut b = pivot * 2.0;
    while q(b) <= 0.0 {
        b *= 2.0;
    }
    let s2 = refine_root(&q, &dq, pivot, b, 0.0);
    let bound = be_lower_bound(model);
    [s1 * s1, s2 * s2]
        .into_iter()
        .filter(|&lam| lam > bound)
        .collect()
}

/// Bisection with Newton acceleration inside a sign-changing bracket.
/// Stops once `|f| <= f_tol` or the bracket collapses to machine width.
fn refine_root<F, D>(f: &F, df: &D, a: f64, b: f64, f_tol: f64) -> f64
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let (fa, fb) = (f(a), f(b));
    if fa == 0.0 {
        return a;
    }
    if fb == 0.0 {
        return b;
    }
    debug_assert!(
        fa * fb < 0.0,
        "refine_root requires a sign change: f({a}) = {fa}, f({b}) = {fb}"
    );
    // Orient so that f(neg) < 0 < f(pos).
    let (mut neg, mut pos) = if fa < 0.0 { (a, b) } else { (b, a) };
    let mut x = 0.5 * (neg + pos);
    for _ in 0..200 {
        let fx = f(x);
        if fx.abs() <= f_tol {
            return x;
        }
        if fx < 0.0 {
            neg = x;
        } else {
            pos = x;
        }
        if (neg - pos).abs() <= f64::EPSILON * (neg.abs() + pos.abs()) {
            return x;
        }
        let d = df(x);
        let mut next = if d != 0.0 { x - fx / d } else { f64::NAN };
        if !next.is_finite() || (next - neg) * (next - pos) >= 0.0 {
            next = 0.5 * (neg + pos);
        }
        if next == x {
            return x;
        }
        x = next;
    }
    x
}

/// All two-equal stretches solving `dead_load_two_equal(lambda) = tau`
/// (including a root at `lambda = 1` when `tau = 2*mu`).
fn solve_two_equal(model: &MaterialModel, tau: f64) -> Vec<f64> {
    if model.mu2() == 0.0 {
        // s^3 - (tau/mu) s + 1 = 0 with s = sqrt(lambda), solved in closed form.
        let roots = cubic_real_roots(0.0, -(tau / model.mu1()), 1.0);
        let mut out: Vec<f64> = roots
            .into_iter()
            .filter(|&s| s > 1e-9)
            .map(|s| s * s)
            .collect();
        dedupe_sorted(&mut out);
        return out;
    }
    solve_two_equal_bracketed(model, tau)
}

fn solve_two_equal_bracketed(model: &MaterialModel, tau: f64) -> Vec<f64> {
    let f_tol = ROOT_TOL * tau.max(1.0);
    let tangent_tol = 10.0 * f_tol;
    let be = be_lower_bound(model);
    let g = |lam: f64| branch_map_unchecked(model, lam) - tau;
    let dg = |lam: f64| branch_map_derivative(model, lam);
    let sign_of = |v: f64| -> i32 {
        if v.abs() <= tangent_tol {
            0
        } else if v > 0.0 {
            1
        } else {
            -1
        }
    };

    let stats = stationary_stretches(model);
    let mut roots: Vec<f64> = Vec::new();

    // Boundaries of the monotone segments: virtual domain ends plus the
    // stationary stretches. A stationary point sitting on the load level is
    // itself a (double) root and suppresses transversal roots next to it.
    let left_sign = if model.mu2() > 0.0 { 1 } else { -1 };
    let mut nodes: Vec<(Option<f64>, i32)> = vec![(None, left_sign)];
    for &ls in &stats {
        let s = sign_of(g(ls));
        if s == 0 {
            roots.push(ls);
        }
        nodes.push((Some(ls), s));
    }
    nodes.push((None, 1));

    let n = nodes.len();
    for i in 0..n - 1 {
        let (xa, sa) = nodes[i];
        let (xb, sb) = nodes[i + 1];
        if sa * sb >= 0 {
            continue;
        }
        // Materialize finite bracket ends for the virtual boundaries.
        let reference = xa.or(xb).unwrap_or(1.0f64.max(2.0 * be + 1.0));
        let a = match xa {
            Some(x) => x,
            None => {
                let mut x;
                if model.mu2() > 0.0 {
                    // g -> +inf as lambda -> 0+
                    x = reference * 0.5;
                    let mut tries = 0;
                    while g(x) <= 0.0 && tries < 2000 {
                        x *= 0.5;
                        tries += 1;
                    }
                } else {
                    // g -> -tau as lambda -> be+
                    let mut offset = (reference - be) * 0.5;
                    x = be + offset;
                    let mut tries = 0;
                    while g(x) >= 0.0 && tries < 2000 {
                        offset *= 0.5;
                        x = be + offset;
                        tries += 1;
                    }
                }
                x
            }
        };
        let b = match xb {
            Some(x) => x,
            None => {
                let mut x = (2.0 * reference).max(1.0);
                let mut tries = 0;
                while g(x) <= 0.0 && tries < 2000 {
                    x *= 2.0;
                    tries += 1;
                }
                x
            }
        };
        if g(a) * g(b) < 0.0 {
            roots.push(refine_root(&g, &dg, a, b, f_tol));
        }
    }

    roots.sort_by(|x, y| x.partial_cmp(y).unwrap());
    dedupe_sorted(&mut roots);
    roots
}

fn dedupe_sorted(xs: &mut Vec<f64>) {
    xs.dedup_by(|b, a| (*b - *a).abs() <= DISTINCT_TOL * b.abs().max(1.0));
}

/// The three-unequal state at load `tau`, if the branch passes through it.
/// The unordered stretch triple consists of the real roots of
/// `x^3 - ((mu2 + tau)/mu1) x^2 + (mu1/mu2) x - 1`; a valid state needs all
/// three real, positive, and pairwise distinct.
fn solve_three_unequal(model: &MaterialModel, tau: f64) -> Option<StretchTriple> {
    let mu1 = model.mu1();
    let mu2 = model.mu2();
    debug_assert!(mu2 > 0.0);
    let mut roots = cubic_real_roots(-(mu2 + tau) / mu1, mu1 / mu2, -1.0);
    if roots.len() != 3 {
        return None;
    }
    roots.sort_by(|a, b| b.partial_cmp(a).unwrap());
    if roots[2] <= 0.0 {
        return None;
    }
    if (roots[0] - roots[1]).abs() <= DISTINCT_TOL * roots[0]
        || (roots[1] - roots[2]).abs() <= DISTINCT_TOL * roots[1]
    {
        return None;
    }
    // Re-derive the smallest stretch from incompressibility.
    let l3 = 1.0 / (roots[0] * roots[1]);
    if (l3 - roots[2]).abs() > 1e-6 * roots[2] {
        return None;
    }
    StretchTriple::new(roots[0], roots[1], l3).ok()
}

/// Real roots of `x^3 + b x^2 + c x + d`, Newton-polished.
fn cubic_real_roots(b: f64, c: f64, d: f64) -> Vec<f64> {
    let p = c - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    let shift = -b / 3.0;
    let f = |x: f64| ((x + b) * x + c) * x + d;
    let df = |x: f64| (3.0 * x + 2.0 * b) * x + c;

    let disc = 0.25 * q * q + p * p * p / 27.0;
    let disc_scale = (0.25 * q * q).abs().max((p * p * p / 27.0).abs());
    let eps = 1e-14 * disc_scale.max(f64::MIN_POSITIVE);

    let mut roots: Vec<f64> = if p.abs() < 1e-300 && q.abs() < 1e-300 {
        vec![shift]
    } else if disc > eps {
        // One real root; pick the non-cancelling cube-root branch.
        let sq = disc.sqrt();
        let w = if q >= 0.0 { -0.5 * q - sq } else { -0.5 * q + sq };
        let u = w.cbrt();
        let v = if u != 0.0 { -p / (3.0 * u) } else { 0.0 };
        vec![u + v + shift]
    } else {
        // Three real roots (double roots land here too); p < 0 up to rounding.
        let pm = p.min(-f64::MIN_POSITIVE);
        let m = 2.0 * (-pm / 3.0).sqrt();
        let arg = (3.0 * q / (pm * m)).clamp(-1.0, 1.0);
        let phi = arg.acos();
        (0..3)
            .map(|k| m * ((phi - 2.0 * std::f64::consts::PI * k as f64) / 3.0).cos() + shift)
            .collect()
    };

    // Polish, accepting only steps that reduce the residual (plain Newton
    // misbehaves at double roots, where f and f' vanish together).
    for r in roots.iter_mut() {
        for _ in 0..3 {
            let fr = f(*r);
            let dr = df(*r);
            if fr == 0.0 || dr.abs() < 1e-300 {
                break;
            }
            let step = fr / dr;
            if !step.is_finite() || step.abs() >= 0.5 * (1.0 + r.abs()) {
                break;
            }
            let trial = *r - step;
            if f(trial).abs() < fr.abs() {
                *r = trial;
            } else {
                break;
            }
        }
    }
    roots
}

/// All equilibria at dead load `tau`, one canonical representative per
/// permutation orbit. Non-positive loads admit only the trivial state.
pub fn solve_equilibria(model: &MaterialModel, tau: f64) -> Result<Vec<Equilibrium>> {
    let mut out = vec![Equilibrium::new(
        model,
        StretchTriple::identity(),
        BranchKind::Trivial,
        tau,
        1,
    )?];
    if tau <= 0.0 {
        return Ok(out);
    }

    for lam in solve_two_equal(model, tau) {
        if (lam - 1.0).abs() <= TRIVIAL_MERGE_TOL {
            continue;
        }
        let branch = if lam < 1.0 {
            BranchKind::PlateLike
        } else {
            BranchKind::RodLike
        };
        out.push(Equilibrium::new(
            model,
            StretchTriple::two_equal(lam)?,
            branch,
            tau,
            3,
        )?);
    }

    if model.regime() == Regime::E12 {
        if let Some(triple) = solve_three_unequal(model, tau) {
            out.push(Equilibrium::new(
                model,
                triple,
                BranchKind::ThreeUnequal,
                tau,
                6,
            )?);
        }
    }

    out.sort_by(|a, b| {
        (a.branch.sort_rank(), a.stretches.l1())
            .partial_cmp(&(b.branch.sort_rank(), b.stretches.l1()))
            .unwrap()
    });
    Ok(out)
}

/// Critical loads of the model's regime; `tau0 = 2*mu` always.
pub fn critical_loads(model: &MaterialModel) -> CriticalLoads {
    let mu = model.shear_modulus();
    let mut cl = CriticalLoads {
        tau0: 2.0 * mu,
        tau_star: None,
        lambda_star: None,
        tau_min: None,
        tau_max: None,
        lambda_at_min: None,
        lambda_at_max: None,
    };
    match model.regime() {
        Regime::NeoHookean => {
            let lam = 0.5f64.powf(2.0 / 3.0);
            cl.lambda_star = Some(lam);
            cl.tau_star = Some(3.0 * mu * lam);
        }
        Regime::E12 => {
            let (lo, hi) = three_unequal_interval_unchecked(model);
            cl.tau_min = Some(tau_three_unequal_unchecked(model, lo));
            cl.lambda_at_min = Some(lo);
            cl.tau_max = Some(tau_three_unequal_unchecked(model, hi));
            cl.lambda_at_max = Some(hi);
        }
        Regime::E21 => {
            let stats = stationary_stretches(model);
            if stats.len() == 2 {
                cl.tau_max = Some(branch_map_unchecked(model, stats[0]));
                cl.lambda_at_max = Some(stats[0]);
                cl.tau_min = Some(branch_map_unchecked(model, stats[1]));
                cl.lambda_at_min = Some(stats[1]);
            }
        }
        Regime::E11 | Regime::E22 | Regime::Inadmissible => {}
    }
    cl
}

/// Two-equal branch samples for diagram data: `(lambda, tau, kind)` per grid
/// point, skipping stretches outside the Baker-Ericksen domain.
pub fn branch_trace(model: &MaterialModel, lambda_grid: &[f64]) -> Vec<(f64, f64, BranchKind)> {
    lambda_grid
        .iter()
        .filter_map(|&lam| {
            dead_load_two_equal(model, lam).ok().map(|tau| {
                let kind = if (lam - 1.0).abs() <= 1e-12 {
                    BranchKind::Trivial
                } else if lam < 1.0 {
                    BranchKind::PlateLike
                } else {
                    BranchKind::RodLike
                };
                (lam, tau, kind)
            })
        })
        .collect()
}
