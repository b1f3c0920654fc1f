//! Analytic equilibrium-count probabilities and seeded Monte Carlo ensembles
//! over random materials, producing stochastic bifurcation histograms.
//!
//! Every trial draws its randomness from a counter-based substream keyed by
//! `(seed, purpose, row * trials + trial)`, so results are bit-identical
//! between the sequential reference path and the rayon path at any worker
//! count. With the `parallel` feature (default) ensembles fan out across
//! rows of the dead-load grid; row counts are plain integer sums, so the
//! merge is order-independent.

use crate::constitutive::MaterialModel;
use crate::equilibria::{solve_equilibria, BranchKind};
use crate::error::{Error, Result};
use crate::randvars::{
    beta_cdf, coeffs_from, gamma_cdf, sample_beta, sample_gamma, BetaParams, GammaParams,
    ShiftMode,
};
use crate::rng::RngStream;
use crate::stability::{classify_equilibrium, psi_value, StabilityClass};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Inclusive dead-load grid: `steps` equal intervals, `steps + 1` points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauGrid {
    tau_min: f64,
    tau_max: f64,
    steps: u32,
}

impl TauGrid {
    pub fn new(tau_min: f64, tau_max: f64, steps: u32) -> Result<Self> {
        if !(tau_min.is_finite() && tau_max.is_finite() && tau_min < tau_max) {
            return Err(Error::Domain {
                op: "TauGrid::new",
                reason: format!("requires tau_min < tau_max (got {tau_min}, {tau_max})"),
            });
        }
        if steps == 0 {
            return Err(Error::Domain {
                op: "TauGrid::new",
                reason: "steps must be positive".into(),
            });
        }
        Ok(Self {
            tau_min,
            tau_max,
            steps,
        })
    }

    #[inline]
    pub fn tau_min(&self) -> f64 {
        self.tau_min
    }

    #[inline]
    pub fn tau_max(&self) -> f64 {
        self.tau_max
    }

    #[inline]
    pub fn steps(&self) -> u32 {
        self.steps
    }

    /// Number of grid points (`steps + 1`, both ends included).
    #[inline]
    pub fn len(&self) -> usize {
        self.steps as usize + 1
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> Vec<f64> {
        let h = (self.tau_max - self.tau_min) / f64::from(self.steps);
        (0..=self.steps)
            .map(|k| {
                if k == self.steps {
                    self.tau_max
                } else {
                    self.tau_min + h * f64::from(k)
                }
            })
            .collect()
    }
}

/// Probabilities of one, two, or three coexisting equilibria at a load.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountProbabilities {
    pub tau: f64,
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
}

/// Which stable state a cube reports when several are available.
/// `PreferReference` keeps the reference state whenever it is stable or
/// neutrally stable (the dead load is applied to the reference state, so an
/// unperturbed cube stays there); `LowestPsi` always takes the energy
/// minimizer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SelectionPolicy {
    #[default]
    PreferReference,
    LowestPsi,
}

/// Material law of the random ensemble: shear modulus `mu` is always Gamma;
/// two-term models additionally draw the ratio `R1` from a Beta law and map
/// `(mu, R1)` to coefficients through a shift transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EnsembleLaw {
    NeoHookean,
    MooneyRivlin { r1: BetaParams, shift: ShiftMode },
}

/// Stochastic bifurcation histogram: counts of observed stretches per
/// dead-load row. Each row has one column per stretch bin plus a final
/// overflow column for trials with no stable state (or a stretch outside
/// the binning range); rows always sum to `trials`.
#[derive(Debug, Clone, PartialEq)]
pub struct BifurcationHistogram {
    pub taus: Vec<f64>,
    pub lambda_edges: Vec<f64>,
    /// `counts[row][bin]`; `counts[row][lambda_edges.len() - 1]` is overflow.
    pub counts: Vec<Vec<u64>>,
    pub trials: u64,
    pub seed: u64,
}

impl BifurcationHistogram {
    #[inline]
    pub fn n_bins(&self) -> usize {
        self.lambda_edges.len() - 1
    }

    pub fn bin_center(&self, bin: usize) -> f64 {
        0.5 * (self.lambda_edges[bin] + self.lambda_edges[bin + 1])
    }

    /// Index of the bin whose center is exactly 1 (the trivial-state atom).
    pub fn unit_bin(&self) -> Option<usize> {
        (0..self.n_bins()).find(|&b| (self.bin_center(b) - 1.0).abs() < 1e-9)
    }

    pub fn overflow(&self, row: usize) -> u64 {
        self.counts[row][self.n_bins()]
    }

    pub fn frequency(&self, row: usize, bin: usize) -> f64 {
        self.counts[row][bin] as f64 / self.trials as f64
    }
}

const TWO_POW_TWO_THIRDS: f64 = 1.5874010519681994;

/// Analytic count probabilities for the one-term ensemble:
/// `p1 = P(mu > 2^(2/3) tau / 3)` (trivial state only),
/// `p2 = P(mu < tau/2)` (two non-trivial states), `p3` the remainder
/// (all three coexist).
pub fn count_probs_nh(tau: f64, g: &GammaParams) -> Result<CountProbabilities> {
    if !(tau > 0.0) {
        return Err(Error::Domain {
            op: "count_probs_nh",
            reason: format!("requires a tensile load (tau = {tau})"),
        });
    }
    let upper = gamma_cdf(g, TWO_POW_TWO_THIRDS * tau / 3.0);
    let lower = gamma_cdf(g, 0.5 * tau);
    Ok(CountProbabilities {
        tau,
        p1: 1.0 - upper,
        p2: lower,
        p3: upper - lower,
    })
}

/// `P(2 mu > tau)`: probability that the reference state is still stable.
pub fn prob_trivial_stable(tau: f64, g: &GammaParams) -> Result<f64> {
    if !(tau > 0.0) {
        return Err(Error::Domain {
            op: "prob_trivial_stable",
            reason: format!("requires a tensile load (tau = {tau})"),
        });
    }
    Ok(1.0 - gamma_cdf(g, 0.5 * tau))
}

/// `(P(mu2 < mu1/3), P(mu2 > mu1/3))` under the zero-shift transform, i.e.
/// the Beta mass above and below `R1 = 3/4`.
pub fn prob_secondary_regime(b: &BetaParams) -> (f64, f64) {
    let below = beta_cdf(b, 0.75);
    (1.0 - below, below)
}

fn count_row(tau: f64, trials: u64, g: &GammaParams, seed: u64, row: u64) -> CountProbabilities {
    let upper = TWO_POW_TWO_THIRDS * tau / 3.0;
    let lower = 0.5 * tau;
    let (mut n1, mut n2, mut n3) = (0u64, 0u64, 0u64);
    for j in 0..trials {
        let mut stream = RngStream::new(seed, "count", row * trials + j);
        let mu = sample_gamma(g, &mut stream);
        if mu > upper {
            n1 += 1;
        } else if mu < lower {
            n2 += 1;
        } else {
            n3 += 1;
        }
    }
    let n = trials as f64;
    CountProbabilities {
        tau,
        p1: n1 as f64 / n,
        p2: n2 as f64 / n,
        p3: n3 as f64 / n,
    }
}

/// Empirical count probabilities: per grid point, `trials` Gamma draws
/// tallied against the three load intervals. Deterministic per seed.
pub fn mc_count_probs(
    grid: &TauGrid,
    trials: u64,
    g: &GammaParams,
    seed: u64,
) -> Result<Vec<CountProbabilities>> {
    if trials == 0 {
        return Err(Error::Domain {
            op: "mc_count_probs",
            reason: "trials must be positive".into(),
        });
    }
    let taus = grid.values();
    #[cfg(feature = "parallel")]
    {
        Ok(taus
            .par_iter()
            .enumerate()
            .map(|(t, &tau)| count_row(tau, trials, g, seed, t as u64))
            .collect())
    }
    #[cfg(not(feature = "parallel"))]
    {
        Ok(taus
            .iter()
            .enumerate()
            .map(|(t, &tau)| count_row(tau, trials, g, seed, t as u64))
            .collect())
    }
}

/// Sequential reference path of [`mc_count_probs`]; bit-identical output.
pub fn mc_count_probs_serial(
    grid: &TauGrid,
    trials: u64,
    g: &GammaParams,
    seed: u64,
) -> Result<Vec<CountProbabilities>> {
    if trials == 0 {
        return Err(Error::Domain {
            op: "mc_count_probs_serial",
            reason: "trials must be positive".into(),
        });
    }
    Ok(grid
        .values()
        .iter()
        .enumerate()
        .map(|(t, &tau)| count_row(tau, trials, g, seed, t as u64))
        .collect())
}

/// The state a single cube reports at load `tau`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservedState {
    /// Axis-1 stretch of the reported state (1 for the reference state).
    pub lambda: f64,
    pub branch: BranchKind,
    /// `Unstable` flags a trial with no stable state at all.
    pub stability: StabilityClass,
}

/// Observed stable stretch of one cube: the reference state while it is
/// stable (under `PreferReference`), otherwise the stable or neutrally
/// stable branch state minimizing the potential, with the smaller stretch
/// breaking ties. Returns `lambda = 1` flagged `Unstable` when nothing
/// stable exists.
pub fn observed_stretch(
    model: &MaterialModel,
    tau: f64,
    policy: SelectionPolicy,
) -> Result<ObservedState> {
    if !(tau > 0.0) {
        return Err(Error::Domain {
            op: "observed_stretch",
            reason: format!("requires a tensile load (tau = {tau})"),
        });
    }
    let eqs = solve_equilibria(model, tau)?;
    let classes: Vec<StabilityClass> = eqs
        .iter()
        .map(|eq| classify_equilibrium(model, eq))
        .collect::<Result<_>>()?;

    let is_stable =
        |c: StabilityClass| matches!(c, StabilityClass::Stable | StabilityClass::NeutrallyStable);

    if policy == SelectionPolicy::PreferReference {
        let trivial_idx = eqs
            .iter()
            .position(|e| e.branch == BranchKind::Trivial)
            .expect("solver always returns the trivial state");
        if is_stable(classes[trivial_idx]) {
            return Ok(ObservedState {
                lambda: 1.0,
                branch: BranchKind::Trivial,
                stability: classes[trivial_idx],
            });
        }
    }

    let mut best: Option<(f64, f64, usize)> = None; // (psi, lambda, index)
    for (i, eq) in eqs.iter().enumerate() {
        if !is_stable(classes[i]) {
            continue;
        }
        if policy == SelectionPolicy::PreferReference && eq.branch == BranchKind::Trivial {
            continue; // unreachable given the early return, kept for clarity
        }
        let psi = psi_value(model, &eq.stretches, tau);
        let lam = eq.stretches.l1();
        let better = match best {
            None => true,
            Some((bp, bl, _)) => psi < bp || (psi == bp && lam < bl),
        };
        if better {
            best = Some((psi, lam, i));
        }
    }

    match best {
        Some((_, lam, i)) => Ok(ObservedState {
            lambda: lam,
            branch: eqs[i].branch,
            stability: classes[i],
        }),
        None => Ok(ObservedState {
            lambda: 1.0,
            branch: BranchKind::Trivial,
            stability: StabilityClass::Unstable,
        }),
    }
}

/// Default stretch binning: width 0.005 covering (0, 5), arranged so that
/// `lambda = 1` sits exactly at a bin center (the trivial-state atom must
/// not straddle an edge).
pub fn default_lambda_edges() -> Vec<f64> {
    let mut edges = vec![0.0];
    let mut k = 0u32;
    loop {
        let e = 0.0025 + 0.005 * f64::from(k);
        if e >= 5.0 {
            break;
        }
        edges.push(e);
        k += 1;
    }
    edges.push(5.0);
    edges
}

fn bin_index(edges: &[f64], lambda: f64) -> Option<usize> {
    if lambda < edges[0] || lambda >= edges[edges.len() - 1] {
        return None;
    }
    let idx = edges.partition_point(|&e| e <= lambda);
    Some(idx - 1)
}

fn draw_model(law: &EnsembleLaw, g: &GammaParams, stream: &mut RngStream) -> Result<MaterialModel> {
    let mu = sample_gamma(g, stream);
    match law {
        EnsembleLaw::NeoHookean => MaterialModel::new(mu, 0.0),
        EnsembleLaw::MooneyRivlin { r1, shift } => {
            let r = sample_beta(r1, stream);
            let (mu1, mu2) = coeffs_from(mu, r, *shift)?;
            MaterialModel::new(mu1, mu2)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn histogram_row(
    tau: f64,
    trials: u64,
    g: &GammaParams,
    law: &EnsembleLaw,
    policy: SelectionPolicy,
    seed: u64,
    row: u64,
    edges: &[f64],
) -> Result<Vec<u64>> {
    let n_bins = edges.len() - 1;
    let mut counts = vec![0u64; n_bins + 1];
    for j in 0..trials {
        let mut stream = RngStream::new(seed, "histogram", row * trials + j);
        // A draw outside the admissible set (possible only under an explicit
        // fixed shift) has no observable state: it lands in overflow.
        let col = match draw_model(law, g, &mut stream) {
            Ok(model) => {
                let obs = observed_stretch(&model, tau, policy)?;
                if obs.stability == StabilityClass::Unstable {
                    n_bins
                } else {
                    bin_index(edges, obs.lambda).unwrap_or(n_bins)
                }
            }
            Err(_) => n_bins,
        };
        counts[col] += 1;
    }
    Ok(counts)
}

fn validate_histogram_inputs(trials: u64, lambda_edges: &[f64]) -> Result<()> {
    if trials == 0 {
        return Err(Error::Domain {
            op: "mc_bifurcation_histogram",
            reason: "trials must be positive".into(),
        });
    }
    if lambda_edges.len() < 2 || lambda_edges.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain {
            op: "mc_bifurcation_histogram",
            reason: "lambda edges must be strictly increasing with at least one bin".into(),
        });
    }
    Ok(())
}

/// Seeded stochastic bifurcation histogram: per grid row and trial, draw a
/// material, find its observed stable stretch, and increment that stretch
/// bin. Deterministic per seed; the rayon and sequential paths are
/// bit-identical at any worker count.
#[allow(clippy::too_many_arguments)]
pub fn mc_bifurcation_histogram(
    grid: &TauGrid,
    trials: u64,
    g: &GammaParams,
    law: &EnsembleLaw,
    policy: SelectionPolicy,
    seed: u64,
    lambda_edges: &[f64],
) -> Result<BifurcationHistogram> {
    validate_histogram_inputs(trials, lambda_edges)?;
    let taus = grid.values();
    #[cfg(feature = "parallel")]
    let counts: Result<Vec<Vec<u64>>> = taus
        .par_iter()
        .enumerate()
        .map(|(t, &tau)| histogram_row(tau, trials, g, law, policy, seed, t as u64, lambda_edges))
        .collect();
    #[cfg(not(feature = "parallel"))]
    let counts: Result<Vec<Vec<u64>>> = taus
        .iter()
        .enumerate()
        .map(|(t, &tau)| histogram_row(tau, trials, g, law, policy, seed, t as u64, lambda_edges))
        .collect();
    Ok(BifurcationHistogram {
        taus,
        lambda_edges: lambda_edges.to_vec(),
        counts: counts?,
        trials,
        seed,
    })
}

/// Sequential reference path of [`mc_bifurcation_histogram`].
#[allow(clippy::too_many_arguments)]
pub fn mc_bifurcation_histogram_serial(
    grid: &TauGrid,
    trials: u64,
    g: &GammaParams,
    law: &EnsembleLaw,
    policy: SelectionPolicy,
    seed: u64,
    lambda_edges: &[f64],
) -> Result<BifurcationHistogram> {
    validate_histogram_inputs(trials, lambda_edges)?;
    let taus = grid.values();
    let counts: Result<Vec<Vec<u64>>> = taus
        .iter()
        .enumerate()
        .map(|(t, &tau)| histogram_row(tau, trials, g, law, policy, seed, t as u64, lambda_edges))
        .collect();
    Ok(BifurcationHistogram {
        taus,
        lambda_edges: lambda_edges.to_vec(),
        counts: counts?,
        trials,
        seed,
    })
}
