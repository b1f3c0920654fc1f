//! Probability laws for the random material: a Gamma-distributed shear
//! modulus `mu`, a Beta-distributed ratio `R1`, and the shift transforms
//! mapping `(mu, R1)` to a coefficient pair `(mu1, mu2)`.

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::special::{ln_gamma, reg_inc_beta, reg_lower_gamma};

/// Gamma hyperparameters: shape `rho1`, scale `rho2` (stress units).
/// Mean is `rho1*rho2` and variance `rho1*rho2^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaParams {
    rho1: f64,
    rho2: f64,
}

impl GammaParams {
    pub fn new(rho1: f64, rho2: f64) -> Result<Self> {
        if !(rho1 > 0.0 && rho1.is_finite() && rho2 > 0.0 && rho2.is_finite()) {
            return Err(Error::Domain {
                op: "GammaParams::new",
                reason: format!("hyperparameters must be positive (rho1={rho1}, rho2={rho2})"),
            });
        }
        Ok(Self { rho1, rho2 })
    }

    #[inline]
    pub fn rho1(&self) -> f64 {
        self.rho1
    }

    #[inline]
    pub fn rho2(&self) -> f64 {
        self.rho2
    }

    #[inline]
    pub fn mean(&self) -> f64 {
        self.rho1 * self.rho2
    }

    #[inline]
    pub fn variance(&self) -> f64 {
        self.rho1 * self.rho2 * self.rho2
    }
}

/// Beta hyperparameters `(xi1, xi2)`; mean `xi1/(xi1+xi2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaParams {
    xi1: f64,
    xi2: f64,
}

impl BetaParams {
    pub fn new(xi1: f64, xi2: f64) -> Result<Self> {
        if !(xi1 > 0.0 && xi1.is_finite() && xi2 > 0.0 && xi2.is_finite()) {
            return Err(Error::Domain {
                op: "BetaParams::new",
                reason: format!("hyperparameters must be positive (xi1={xi1}, xi2={xi2})"),
            });
        }
        Ok(Self { xi1, xi2 })
    }

    #[inline]
    pub fn xi1(&self) -> f64 {
        self.xi1
    }

    #[inline]
    pub fn xi2(&self) -> f64 {
        self.xi2
    }

    #[inline]
    pub fn mean(&self) -> f64 {
        self.xi1 / (self.xi1 + self.xi2)
    }

    #[inline]
    pub fn variance(&self) -> f64 {
        let s = self.xi1 + self.xi2;
        self.xi1 * self.xi2 / (s * s * (s + 1.0))
    }
}

/// Shift defining the auxiliary ratio `R1 = (mu1 - b)/(mu - 2b)`.
///
/// `Zero` keeps both coefficients positive. `NegativeCase` uses the coupled
/// shift `b = -mu1/5^(5/3)`, which confines `mu2` above `-mu1/5^(5/3)` (the
/// existence bound for non-trivial states at negative `mu2`). `Fixed(b)`
/// applies an explicit constant shift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ShiftMode {
    Zero,
    NegativeCase,
    Fixed(f64),
}

/// First and second moments of the induced coefficient pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientMoments {
    pub mean_mu1: f64,
    pub mean_mu2: f64,
    pub var_mu1: f64,
    pub var_mu2: f64,
    pub cov_mu1_mu2: f64,
}

/// Gamma density; zero for `x <= 0`.
pub fn gamma_pdf(g: &GammaParams, x: f64) -> f64 {
    if x <= 0.0 || !x.is_finite() {
        return 0.0;
    }
    let log_pdf =
        (g.rho1 - 1.0) * x.ln() - x / g.rho2 - g.rho1 * g.rho2.ln() - ln_gamma(g.rho1);
    log_pdf.exp()
}

/// Gamma cumulative distribution `P(mu <= x)`.
pub fn gamma_cdf(g: &GammaParams, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    reg_lower_gamma(g.rho1, x / g.rho2)
}

/// Beta density on the open interval (0, 1); zero outside.
pub fn beta_pdf(b: &BetaParams, r: f64) -> f64 {
    if r <= 0.0 || r >= 1.0 {
        return 0.0;
    }
    let ln1mr = if r < 0.5 { (-r).ln_1p() } else { (1.0 - r).ln() };
    let ln_b = ln_gamma(b.xi1) + ln_gamma(b.xi2) - ln_gamma(b.xi1 + b.xi2);
    ((b.xi1 - 1.0) * r.ln() + (b.xi2 - 1.0) * ln1mr - ln_b).exp()
}

/// Beta cumulative distribution `P(R1 <= r)`.
pub fn beta_cdf(b: &BetaParams, r: f64) -> f64 {
    reg_inc_beta(b.xi1, b.xi2, r)
}

/// Invert the Gamma moment relations `mean = rho1*rho2`,
/// `variance = rho1*rho2^2`.
pub fn gamma_from_moments(mean: f64, variance: f64) -> Result<GammaParams> {
    if !(mean > 0.0 && variance > 0.0) {
        return Err(Error::InfeasibleMoments {
            mean,
            variance,
            reason: "mean and variance must be positive",
        });
    }
    let rho2 = variance / mean;
    GammaParams::new(mean / rho2, rho2)
}

/// Invert the Beta moment relations; requires `mean in (0,1)` and
/// `variance < mean*(1-mean)`.
pub fn beta_from_moments(mean: f64, variance: f64) -> Result<BetaParams> {
    if !(mean > 0.0 && mean < 1.0 && variance > 0.0) {
        return Err(Error::InfeasibleMoments {
            mean,
            variance,
            reason: "mean must lie in (0,1) and variance be positive",
        });
    }
    let bound = mean * (1.0 - mean);
    if variance >= bound {
        return Err(Error::InfeasibleMoments {
            mean,
            variance,
            reason: "variance must be below mean*(1-mean)",
        });
    }
    let total = bound / variance - 1.0;
    BetaParams::new(mean * total, (1.0 - mean) * total)
}

/// One Gamma draw from the stream (Marsaglia-Tsang squeeze, with the
/// standard `u^(1/a)` boost for shapes below one).
pub fn sample_gamma(g: &GammaParams, stream: &mut RngStream) -> f64 {
    g.rho2 * sample_standard_gamma(g.rho1, stream)
}

fn sample_standard_gamma(shape: f64, stream: &mut RngStream) -> f64 {
    if shape < 1.0 {
        let u = stream.next_open01();
        return sample_standard_gamma(shape + 1.0, stream) * u.powf(1.0 / shape);
    }
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let x = stream.next_normal();
        let v = 1.0 + c * x;
        if v <= 0.0 {
            continue;
        }
        let v = v * v * v;
        let u = stream.next_open01();
        let x2 = x * x;
        if u < 1.0 - 0.0331 * x2 * x2 {
            return d * v;
        }
        if u.ln() < 0.5 * x2 + d * (1.0 - v + v.ln()) {
            return d * v;
        }
    }
}

/// One Beta draw as a ratio of two Gamma draws from the same stream.
pub fn sample_beta(b: &BetaParams, stream: &mut RngStream) -> f64 {
    let x = sample_standard_gamma(b.xi1, stream);
    let y = sample_standard_gamma(b.xi2, stream);
    x / (x + y)
}

/// Map a `(mu, r1)` pair to coefficients `(mu1, mu2)`.
///
/// `Zero`: `mu1 = r1*mu`, `mu2 = (1-r1)*mu`, both positive.
/// `NegativeCase`: exact inversion of `r1 = mu1*(1+c)/(mu + 2*c*mu1)` with
/// `c = 5^(-5/3)`, which guarantees `mu2 > -mu1/5^(5/3)`.
/// `Fixed(b)`: `mu1 = r1*(mu - 2b) + b`.
pub fn coeffs_from(mu: f64, r1: f64, mode: ShiftMode) -> Result<(f64, f64)> {
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(Error::Domain {
            op: "coeffs_from",
            reason: format!("shear modulus must be positive (mu={mu})"),
        });
    }
    if !(r1 > 0.0 && r1 < 1.0) {
        return Err(Error::Domain {
            op: "coeffs_from",
            reason: format!("ratio must lie in the open interval (0,1) (r1={r1})"),
        });
    }
    let mu1 = match mode {
        ShiftMode::Zero => r1 * mu,
        ShiftMode::NegativeCase => {
            let c = crate::constitutive::shift_ratio();
            r1 * mu / (1.0 + c - 2.0 * c * r1)
        }
        ShiftMode::Fixed(b) => r1 * (mu - 2.0 * b) + b,
    };
    Ok((mu1, mu - mu1))
}

/// Closed-form moments of the coefficient pair induced by independent
/// `mu ~ Gamma(g)` and `R1 ~ Beta(b)` under a constant shift `b`:
/// `mean_mu1 = mean(R1)*(mean(mu) - 2b) + b`,
/// `Var(mu1) = (mean(mu)-2b)^2 Var(R1) + mean(R1)^2 Var(mu) + Var(mu)Var(R1)`,
/// and `Cov = (Var(mu) - Var(mu1) - Var(mu2))/2`.
pub fn coeff_moments(g: &GammaParams, b: &BetaParams, shift_b: f64) -> CoefficientMoments {
    let mu_mean = g.mean();
    let mu_var = g.variance();
    let r_mean = b.mean();
    let r_var = b.variance();
    let span = mu_mean - 2.0 * shift_b;

    let mean_mu1 = r_mean * span + shift_b;
    let mean_mu2 = mu_mean - mean_mu1;
    let var_mu1 = span * span * r_var + r_mean * r_mean * mu_var + mu_var * r_var;
    let one_minus = 1.0 - r_mean;
    let var_mu2 = span * span * r_var + one_minus * one_minus * mu_var + mu_var * r_var;
    let cov = 0.5 * (mu_var - var_mu1 - var_mu2);

    CoefficientMoments {
        mean_mu1,
        mean_mu2,
        var_mu1,
        var_mu2,
        cov_mu1_mu2: cov,
    }
}
